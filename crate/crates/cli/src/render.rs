//! 8-bit PGM rendering of grid magnitudes.

use tfq_core::spectral::Grid2D;

pub const DEFAULT_BETA: f64 = 100.0;

/// Log-compressed pixel value `round(255 ln(1 + beta a) / ln(1 + beta))` for
/// a magnitude `a` already divided by the grid maximum.
pub fn pixel(a: f64, beta: f64) -> u8 {
    let v = 255.0 * (beta * a).ln_1p() / beta.ln_1p();
    v.round().clamp(0.0, 255.0) as u8
}

/// Binary PGM (`P5`) of `|g|`. Columns follow axis 0 (time), rows follow
/// axis 1 (frequency) with the highest frequency in the top row. An all-zero
/// grid renders black.
pub fn render_pgm(g: &Grid2D, beta: f64) -> Vec<u8> {
    let [n0, n1] = g.shape();
    let vmax = g.max_abs();
    let mut out = format!("P5\n{n0} {n1}\n255\n").into_bytes();
    out.reserve(n0 * n1);
    for row in (0..n1).rev() {
        for col in 0..n0 {
            let a = if vmax > 0.0 { g.get(col, row).norm() / vmax } else { 0.0 };
            out.push(pixel(a, beta));
        }
    }
    out
}
