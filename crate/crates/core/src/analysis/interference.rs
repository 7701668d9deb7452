//! Cross-term geometry of multicomponent signals.
//!
//! Each pair of Gabor atoms produces an interference pattern around its
//! midpoint. The pattern is measured inside an axis-aligned box: across the
//! joining line it extends three auto-term standard deviations; along an axis
//! on which the atoms are separated it reaches out to the edge of the auto-term
//! cores, so that cross-term mass smeared along the joining line is counted.
//! The attenuation ratio is the L1 mass of the kernel's distribution over the
//! box divided by that of the Wigner distribution. Also reported: the L2
//! energy ratio over the box, and the L2 energy of the isolated cross
//! component `Q(fi + fj) - Q(fi) - Q(fj)` over the box relative to Wigner's.

use std::f64::consts::PI;

use super::report::{Metric, Report, Tolerance};
use crate::distributions::{cohen_from_wigner, wigner, CohenKernel};
use crate::error::Result;
use crate::signals::{synthesize, ComponentSpec, Timebase};
use crate::spectral::Grid2D;

/// Standard deviations of the Wigner auto-term of an atom with spread `s`
/// (in time and in frequency).
pub fn auto_term_spread(s: f64) -> (f64, f64) {
    let k = 2.0 * PI.sqrt();
    (s / k, 1.0 / (k * s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub center: (f64, f64),
    pub half: (f64, f64),
}

impl Region {
    fn overlaps(&self, o: &Region) -> bool {
        (self.center.0 - o.center.0).abs() < self.half.0 + o.half.0
            && (self.center.1 - o.center.1).abs() < self.half.1 + o.half.1
    }

    fn contains(&self, x: f64, w: f64) -> bool {
        (x - self.center.0).abs() <= self.half.0 && (w - self.center.1).abs() <= self.half.1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairGeometry {
    pub i: usize,
    pub j: usize,
    pub midpoint: (f64, f64),
    pub offset: (f64, f64),
    /// Angle of the joining line, degrees in (-90, 90].
    pub angle_deg: f64,
    pub oblique: bool,
    pub region: Region,
}

struct Atom {
    center: (f64, f64),
    spread: (f64, f64),
}

fn atoms(components: &[ComponentSpec]) -> Vec<(usize, Atom)> {
    components
        .iter()
        .enumerate()
        .filter_map(|(k, c)| match *c {
            ComponentSpec::Gabor { center, spread, .. } => Some((k, Atom { center, spread: auto_term_spread(spread) })),
            _ => None,
        })
        .collect()
}

fn auto_region(a: &Atom) -> Region {
    Region { center: a.center, half: (3.0 * a.spread.0, 3.0 * a.spread.1) }
}

/// Geometry of every unordered pair of Gabor atoms. Offsets smaller than
/// half a lattice step (`grid_step`) count as zero.
pub fn pair_geometry(components: &[ComponentSpec], grid_step: (f64, f64)) -> Vec<PairGeometry> {
    let list = atoms(components);
    let mut out = Vec::new();
    for (a, (i, p)) in list.iter().enumerate() {
        for (j, q) in list.iter().skip(a + 1) {
            let dx = q.center.0 - p.center.0;
            let dw = q.center.1 - p.center.1;
            let sep_t = dx.abs() >= 0.5 * grid_step.0;
            let sep_f = dw.abs() >= 0.5 * grid_step.1;
            let st = p.spread.0.max(q.spread.0);
            let sf = p.spread.1.max(q.spread.1);
            let reach = |sep: bool, d: f64, s: f64| if sep { (3.0 * s).max(0.5 * d.abs() - 3.0 * s) } else { 3.0 * s };
            let mut angle = dw.atan2(dx).to_degrees();
            if angle <= -90.0 {
                angle += 180.0;
            } else if angle > 90.0 {
                angle -= 180.0;
            }
            out.push(PairGeometry {
                i: *i,
                j: *j,
                midpoint: (0.5 * (p.center.0 + q.center.0), 0.5 * (p.center.1 + q.center.1)),
                offset: (dx, dw),
                angle_deg: angle,
                oblique: sep_t && sep_f,
                region: Region {
                    center: (0.5 * (p.center.0 + q.center.0), 0.5 * (p.center.1 + q.center.1)),
                    half: (reach(sep_t, dx, st), reach(sep_f, dw, sf)),
                },
            });
        }
    }
    out
}

/// L1 mass and L2 energy of `g` over a region.
pub fn region_mass(g: &Grid2D, r: &Region) -> (f64, f64) {
    let (mut l1, mut l2) = (0.0, 0.0);
    for i in 0..g.shape()[0] {
        let x = g.coord(0, i);
        if (x - r.center.0).abs() > r.half.0 {
            continue;
        }
        for j in 0..g.shape()[1] {
            if r.contains(x, g.coord(1, j)) {
                let v = g.get(i, j).norm();
                l1 += v;
                l2 += v * v;
            }
        }
    }
    let cell = g.cell_area();
    (l1 * cell, l2 * cell)
}

/// Per-pair attenuation of cross terms for each kernel relative to Wigner.
///
/// Born-Jordan ratios are checked: below 0.2 for oblique pairs, above 0.5
/// for axis-aligned ones. Other kernels are reported without a band.
pub fn interference_report(tb: &Timebase, components: &[ComponentSpec], kernels: &[CohenKernel]) -> Result<Report> {
    let mut report = Report::new();
    let step = (tb.dt, 1.0 / (2.0 * tb.n as f64 * tb.dt));
    let pairs = pair_geometry(components, step);
    if pairs.is_empty() {
        return Ok(report);
    }
    let f = synthesize(tb, components)?;
    let w = wigner(&f)?;
    let autos: Vec<Region> = atoms(components).iter().map(|(_, a)| auto_region(a)).collect();
    let others: Vec<&CohenKernel> = kernels.iter().filter(|k| **k != CohenKernel::Wigner).collect();
    let dists: Vec<Grid2D> = others
        .iter()
        .map(|k| cohen_from_wigner(&w, |a, b| k.phi(a * b)))
        .collect::<Result<_>>()?;

    // isolated cross components Q(fi + fj) - Q(fi) - Q(fj), Wigner first
    let mut all: Vec<&CohenKernel> = vec![&CohenKernel::Wigner];
    all.extend(others.iter().copied());
    let single = |idx: usize| synthesize(tb, &components[idx..=idx]);
    let mut auto_q: std::collections::BTreeMap<usize, Vec<Grid2D>> = Default::default();
    for pg in &pairs {
        for idx in [pg.i, pg.j] {
            if !auto_q.contains_key(&idx) {
                let wi = wigner(&single(idx)?)?;
                let qs = all.iter().map(|k| cohen_from_wigner(&wi, |a, b| k.phi(a * b))).collect::<Result<_>>()?;
                auto_q.insert(idx, qs);
            }
        }
    }

    for pg in &pairs {
        let overlap = autos.iter().any(|a| a.overlaps(&pg.region));
        let name = format!("pair.{}-{}", pg.i, pg.j);
        if overlap {
            report.warn(format!("{name}: cross-term region overlaps an auto-term region"));
        }
        let pair_w = wigner(&synthesize(tb, &[components[pg.i].clone(), components[pg.j].clone()])?)?;
        let cross: Vec<f64> = all
            .iter()
            .enumerate()
            .map(|(n, k)| {
                let qp = cohen_from_wigner(&pair_w, |a, b| k.phi(a * b))?;
                let (ai, aj) = (&auto_q[&pg.i][n], &auto_q[&pg.j][n]);
                let data = qp.data().iter().zip(ai.data()).zip(aj.data()).map(|((p, x), y)| p - x - y).collect();
                Ok(region_mass(&qp.with_data(data)?, &pg.region).1)
            })
            .collect::<Result<_>>()?;

        let (w1, w2) = region_mass(&w, &pg.region);
        let class = if pg.oblique { "oblique" } else { "axis-aligned" };
        let base = |m: Metric| {
            let m = m
                .param("midpoint", vec![pg.midpoint.0, pg.midpoint.1])
                .param("offset", vec![pg.offset.0, pg.offset.1])
                .param("angle_deg", pg.angle_deg)
                .param("class", class)
                .param("region_half_widths", vec![pg.region.half.0, pg.region.half.1])
                .param("n", tb.n)
                .param("dt", tb.dt);
            if overlap {
                m.param("warning", "cross-term region overlaps an auto-term region")
            } else {
                m
            }
        };
        report.insert(format!("{name}.wigner.mass"), base(Metric::info(w1)));
        report.insert(format!("{name}.wigner.cross_energy"), base(Metric::info(cross[0])));
        for (n, (k, q)) in others.iter().zip(&dists).enumerate() {
            let label = super::kernel_label(k);
            let (q1, q2) = region_mass(q, &pg.region);
            let ratio = if w1 > 0.0 { q1 / w1 } else { f64::NAN };
            let m = if **k == CohenKernel::BornJordan {
                let tol = if pg.oblique { Tolerance::below(0.2) } else { Tolerance::above(0.5) };
                Metric::checked(ratio, tol)
            } else {
                Metric::info(ratio)
            };
            report.insert(format!("{name}.{label}.mass_ratio"), base(m.param("kernel", label.clone())));
            let er = if w2 > 0.0 { q2 / w2 } else { f64::NAN };
            report.insert(format!("{name}.{label}.energy_ratio"), base(Metric::info(er).param("kernel", label.clone())));
            let cr = if cross[0] > 0.0 { cross[n + 1] / cross[0] } else { f64::NAN };
            report.insert(format!("{name}.{label}.cross_energy_ratio"), base(Metric::info(cr).param("kernel", label)));
        }
    }
    Ok(report)
}
