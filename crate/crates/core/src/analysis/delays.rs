use serde::Serialize;

use crate::exec::Exec;
use crate::interference::{closed_form_delays, envelope, InterferenceParams};
use crate::materials::PropagationTimes;
use crate::optimize::golden_section_max;
use crate::{Error, Result};

/// Agreement required between the numeric and closed-form optimum, fs.
pub const NUMERIC_AGREEMENT_FS: f64 = 0.5;

const COARSE_STEP_FS: f64 = 1.0;
const REFINE_XTOL_FS: f64 = 1e-3;
const REFINE_RADIUS_FS: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimalDelays {
    pub tau_a: f64,
    pub tau_b: f64,
}

/// Delays that give both photons in each beam the same average arrival
/// time: `τ_A = (3t_o − t_e − 2t_p)/2`, `τ_B = (t_o − t_e − 2t_e' + 2t_p)/2`.
pub fn optimal_delays(times: &PropagationTimes) -> OptimalDelays {
    let (tau_a, tau_b) = closed_form_delays(times);
    OptimalDelays { tau_a, tau_b }
}

/// Rectangular search region in `(τ_A, τ_B)`, fs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub tau_a: (f64, f64),
    pub tau_b: (f64, f64),
}

impl SearchBox {
    pub fn around(center: OptimalDelays, half_width: f64) -> Self {
        Self {
            tau_a: (center.tau_a - half_width, center.tau_a + half_width),
            tau_b: (center.tau_b - half_width, center.tau_b + half_width),
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("tau_A", self.tau_a), ("tau_B", self.tau_b)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidArgument(format!(
                    "search range for {name} must be finite and increasing, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    fn contains(&self, a: f64, b: f64) -> bool {
        (self.tau_a.0..=self.tau_a.1).contains(&a) && (self.tau_b.0..=self.tau_b.1).contains(&b)
    }

    /// Parameter interval `[t0, t1]` for which `p + t·v` stays inside.
    fn line_interval(&self, p: (f64, f64), v: (f64, f64)) -> (f64, f64) {
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for (x, dx, (lo, hi)) in [(p.0, v.0, self.tau_a), (p.1, v.1, self.tau_b)] {
            if dx != 0.0 {
                let (a, b) = ((lo - x) / dx, (hi - x) / dx);
                t0 = t0.max(a.min(b));
                t1 = t1.min(a.max(b));
            }
        }
        (t0, t1)
    }

    fn on_edge(&self, a: f64, b: f64, tol: f64) -> bool {
        (a - self.tau_a.0).abs() <= tol
            || (a - self.tau_a.1).abs() <= tol
            || (b - self.tau_b.0).abs() <= tol
            || (b - self.tau_b.1).abs() <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericOptimum {
    pub tau_a: f64,
    pub tau_b: f64,
    pub envelope: f64,
    /// The maximizer sits on the edge of the search box, so the
    /// unconstrained optimum probably lies outside it.
    pub on_boundary: bool,
}

/// Maximizes the envelope over a box: a 1 fs grid, then golden-section line
/// searches to 0.001 fs.
///
/// The line searches run along the delay difference and delay sum as well
/// as the two delay axes. The envelope has a ridge (a kink in the delay
/// sum) through its maximum, and searching only along `τ_A` and `τ_B` can
/// stall on that ridge.
pub fn optimize_delays_numeric(
    params: &InterferenceParams,
    search: SearchBox,
    exec: Exec,
) -> Result<NumericOptimum> {
    search.validate()?;
    let grid = |(lo, hi): (f64, f64)| -> Vec<f64> {
        let n = ((hi - lo) / COARSE_STEP_FS).floor() as usize;
        let mut v: Vec<f64> = (0..=n).map(|i| lo + i as f64 * COARSE_STEP_FS).collect();
        if *v.last().expect("non-empty") < hi {
            v.push(hi);
        }
        v
    };
    let a_grid = grid(search.tau_a);
    let b_grid = grid(search.tau_b);
    let rows = exec.map(&a_grid, |&a| {
        b_grid.iter().map(|&b| (envelope(params, a, b), a, b)).fold(
            (f64::NEG_INFINITY, a, b_grid[0]),
            |best, cur| {
                if cur.0 > best.0 {
                    cur
                } else {
                    best
                }
            },
        )
    });
    let (mut best_v, mut a, mut b) =
        rows.into_iter()
            .fold((f64::NEG_INFINITY, a_grid[0], b_grid[0]), |best, cur| {
                if cur.0 > best.0 {
                    cur
                } else {
                    best
                }
            });

    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let directions = [
        (inv_sqrt2, -inv_sqrt2),
        (inv_sqrt2, inv_sqrt2),
        (1.0, 0.0),
        (0.0, 1.0),
    ];
    for _ in 0..50 {
        let (a0, b0) = (a, b);
        for v in directions {
            let (t0, t1) = search.line_interval((a, b), v);
            let lo = t0.max(-REFINE_RADIUS_FS);
            let hi = t1.min(REFINE_RADIUS_FS);
            if lo >= hi {
                continue;
            }
            let m = golden_section_max(
                |t| envelope(params, a + t * v.0, b + t * v.1),
                lo,
                hi,
                REFINE_XTOL_FS,
            );
            let (na, nb) = (a + m.x * v.0, b + m.x * v.1);
            if m.value > best_v && search.contains(na, nb) {
                best_v = m.value;
                a = na;
                b = nb;
            }
        }
        if (a - a0).abs() < 1e-6 && (b - b0).abs() < 1e-6 {
            break;
        }
    }
    Ok(NumericOptimum {
        tau_a: a,
        tau_b: b,
        envelope: best_v,
        on_boundary: search.on_edge(a, b, REFINE_XTOL_FS),
    })
}

/// Moves `tau_b` by at most a quarter fringe so that the fringe phase
/// `ω(τ_A − τ_B) + φ₀` is a multiple of π, i.e. onto the nearest fringe
/// extremum.
pub fn lock_to_fringe(params: &InterferenceParams, tau_a: f64, tau_b: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let phase = params.omega * (tau_a - tau_b) + params.phi0;
    let m = (phase / pi).round();
    tau_a - (m * pi - params.phi0) / params.omega
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_times_need_no_delay() {
        let t = PropagationTimes::new(5000.0, 5000.0, 5000.0, 5000.0);
        let d = optimal_delays(&t);
        assert_eq!((d.tau_a, d.tau_b), (0.0, 0.0));
    }

    #[test]
    fn inverted_box_rejected() {
        let t = PropagationTimes::new(6096.9, 6014.6, 5796.8, 5796.8);
        let p = InterferenceParams::new(t, 0.01, 2.38).unwrap();
        let b = SearchBox {
            tau_a: (10.0, -10.0),
            tau_b: (0.0, 1.0),
        };
        assert!(matches!(
            optimize_delays_numeric(&p, b, Exec::Sequential),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn fringe_lock_moves_less_than_quarter_period() {
        let t = PropagationTimes::new(6096.9, 6014.6, 5796.8, 5796.8);
        let p = InterferenceParams::new(t, 0.01, 2.38)
            .unwrap()
            .with_phi0(0.3);
        for tb in [400.0, 401.1, 409.37] {
            let locked = lock_to_fringe(&p, 26.0, tb);
            assert!((locked - tb).abs() <= 0.25 * 2.0 * std::f64::consts::PI / 2.38 + 1e-12);
            let c = (p.omega * (26.0 - locked) + p.phi0).cos();
            assert!((c.abs() - 1.0).abs() < 1e-12);
        }
    }
}
