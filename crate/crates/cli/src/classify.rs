//! Qualitative shape of a sampled signal and refinement of its extrema.

use pcmem_core::measures::INCREMENT_DEADBAND;
use pcmem_core::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub t: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// No increment above the dead-band.
    NonIncreasing,
    /// `revivals` maximal runs of increase.
    Revivals { revivals: usize },
}

impl Shape {
    pub fn label(&self) -> String {
        match self {
            Shape::NonIncreasing => "non-increasing".into(),
            Shape::Revivals { revivals } => format!("{revivals} revival(s)"),
        }
    }
}

pub fn classify(values: &[f64]) -> Shape {
    let mut revivals = 0;
    let mut rising = false;
    for w in values.windows(2) {
        let up = w[1] - w[0] > INCREMENT_DEADBAND;
        if up && !rising {
            revivals += 1;
        }
        rising = up;
    }
    if revivals == 0 {
        Shape::NonIncreasing
    } else {
        Shape::Revivals { revivals }
    }
}

/// Interior grid extrema, strict on the left and non-strict on the right.
pub fn discrete_extrema(grid: &TimeGrid, values: &[f64]) -> Vec<Extremum> {
    let mut out = Vec::new();
    for k in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[k - 1], values[k], values[k + 1]);
        let kind = if b > a && b >= c {
            ExtremumKind::Max
        } else if b < a && b <= c {
            ExtremumKind::Min
        } else {
            continue;
        };
        out.push(Extremum {
            t: grid.t(k),
            value: b,
            kind,
        });
    }
    out
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the extremum of a unimodal `f` on `[a, b]`.
pub fn golden_section<F, E>(f: F, mut a: f64, mut b: f64, kind: ExtremumKind, tol: f64) -> Result<(f64, f64), E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let sign = match kind {
        ExtremumKind::Max => -1.0,
        ExtremumKind::Min => 1.0,
    };
    let g = |t: f64| f(t).map(|v| sign * v);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    while (b - a).abs() > tol {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

/// Refine a grid extremum within its neighbouring grid cells.
pub fn refine<F, E>(f: F, grid: &TimeGrid, e: &Extremum) -> Result<Extremum, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let h = grid.t_max() / grid.steps() as f64;
    let (t, value) = golden_section(f, (e.t - h).max(0.0), e.t + h, e.kind, 1e-10)?;
    Ok(Extremum { t, value, kind: e.kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn shapes() {
        assert_eq!(classify(&[1.0, 0.5, 0.2]), Shape::NonIncreasing);
        assert_eq!(
            classify(&[1.0, 0.5, 0.8, 0.2, 0.3, 0.4]),
            Shape::Revivals { revivals: 2 }
        );
    }

    #[test]
    fn refines_cosine_extrema() {
        let grid = TimeGrid::new(10.0, 50).unwrap();
        let values: Vec<f64> = grid.points().map(f64::cos).collect();
        let ext = discrete_extrema(&grid, &values);
        assert_eq!(ext.len(), 3);
        let f = |t: f64| Ok::<_, Infallible>(t.cos());
        for e in &ext {
            let r = refine(f, &grid, e).unwrap();
            let expected = if r.kind == ExtremumKind::Max { 1.0 } else { -1.0 };
            assert!((r.value - expected).abs() < 1e-15);
            assert!((r.t / std::f64::consts::PI - (r.t / std::f64::consts::PI).round()).abs() < 1e-7);
        }
    }
}
