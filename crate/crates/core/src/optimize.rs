//! One-dimensional search primitives: golden-section maximization and
//! bracketed root finding.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a bracketed maximization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// narrowing the bracket until it is shorter than `xtol`.
///
/// The endpoints are compared against the interior estimate, so a monotone
/// function returns the better endpoint instead of a point just inside it.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let xtol = xtol.max(f64::EPSILON * (a.abs() + b.abs()));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let mut best = Maximum { x, value: f(x) };
    for edge in [lo, hi] {
        let v = f(edge);
        if v > best.value {
            best = Maximum { x: edge, value: v };
        }
    }
    best
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let m = golden_section_max(|x| -f(x), lo, hi, xtol);
    Maximum {
        x: m.x,
        value: -m.value,
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Returns `None` when the
/// endpoints do not bracket a root.
pub fn bisect<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}
