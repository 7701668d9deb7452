use clap::Parser;

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("TFQ_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("TFQ_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("TFQ_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() {
    let cli = tfq_cli::Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    std::process::exit(tfq_cli::main_with(cli));
}
