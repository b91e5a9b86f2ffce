//! Float diagnostics for the limiting behaviour of the finite-n bound.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::to_f64;
use crate::schedule::Schedule;

/// `f(x) = (1 − e^{−x})/x − e^{−x}`, positive for `x > 0`.
pub fn limit_profile(x: f64) -> f64 {
    let e = (-x).exp();
    // -expm1(-x) keeps precision for small x
    -(-x).exp_m1() / x - e
}

/// `(1/4)(1 − 3/e²)`, the limit of `(1 − r_{n+1}/r_n) f(r_n N(n))` for
/// halving tails and `r_n N(n) = 2`.
pub fn c_prime() -> f64 {
    0.25 * (1.0 - 3.0 * (-2.0f64).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub n: usize,
    pub r_n_times_n: f64,
    /// `(1 − r_n)^{N(n)}`
    pub power: f64,
    /// `e^{−r_n N(n)}`
    pub exponential: f64,
    pub gap: f64,
    /// `(1 − r_{n+1}/r_n) f(r_n N(n))`
    pub limit_constant: f64,
}

pub fn limit_diagnostics(sched: &Schedule, ns: impl IntoIterator<Item = usize>) -> Result<Vec<LimitRow>> {
    ns.into_iter()
        .map(|n| {
            let r = to_f64(&sched.r(n));
            let big_n = sched.big_n(n)? as f64;
            let x = r * big_n;
            let power = (big_n * (-r).ln_1p()).exp();
            let exponential = (-x).exp();
            let ratio = to_f64(&(sched.r(n + 1) / sched.r(n)));
            Ok(LimitRow {
                n,
                r_n_times_n: x,
                power,
                exponential,
                gap: (power - exponential).abs(),
                limit_constant: (1.0 - ratio) * limit_profile(x),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_values() {
        let e1 = (-1.0f64).exp();
        assert!((limit_profile(1.0) - (1.0 - 2.0 * e1)).abs() < 1e-12);
        assert!((limit_profile(1.0) - 0.264_241_117_657_115_4).abs() < 1e-12);
        for i in 1..2000 {
            let x = i as f64 * 0.01;
            assert!(limit_profile(x) > 0.0, "x = {x}");
        }
        assert!(limit_profile(1e-9) > 0.0);
    }

    #[test]
    fn c_prime_value() {
        assert!((c_prime() - 0.148_498_5).abs() < 1e-7);
    }

    #[test]
    fn standard_schedule_gap_shrinks() {
        let rows = limit_diagnostics(&Schedule::standard(2), 2..=20).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].gap < w[0].gap);
        }
        let last = rows.last().unwrap();
        assert_eq!(last.r_n_times_n, 2.0);
        assert!((last.power - (-2.0f64).exp()).abs() < 1e-5);
        assert!((last.limit_constant - c_prime()).abs() < 1e-5);
    }
}
