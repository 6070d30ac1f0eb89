//! Monomial curves in the plane and their branch structure.
//!
//! A monomial curve has components `±|t|^beta_i`, with one sign tuple for the
//! `t > 0` branch and one for `t <= 0`. The standard parabola `t -> (t, t^2)`
//! is the instance `beta = (1, 2)`, `eps = (+, +)`, `delta = (-, +)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Point;

/// Exact power `x^beta` for `x >= 0`, with fast paths for the small integer
/// exponents that dominate in practice (keeps the parabola bit-exact).
pub(crate) fn pow_pos(x: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        x
    } else if beta == 2.0 {
        x * x
    } else if beta == 3.0 {
        x * x * x
    } else if beta == 0.5 {
        x.sqrt()
    } else {
        x.powf(beta)
    }
}

/// Inverse power `x^(1/beta)` for `x >= 0`.
pub(crate) fn root_pos(x: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        x
    } else if beta == 2.0 {
        x.sqrt()
    } else if x == f64::INFINITY {
        f64::INFINITY
    } else {
        x.powf(1.0 / beta)
    }
}

/// Two-branch monomial curve `t -> (s_1 |t|^beta_1, s_2 |t|^beta_2)` with
/// signs `eps` on `t > 0` and `delta` on `t <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialCurve {
    pub beta: [f64; 2],
    pub eps: [i8; 2],
    pub delta: [i8; 2],
}

/// Partition of the coordinate indices by whether the two branches disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipClass {
    /// Indices with `eps_i != delta_i` (nonempty by the curve invariant).
    pub flip_set: Vec<usize>,
    /// Indices with `eps_i == delta_i`.
    pub fixed_set: Vec<usize>,
}

impl FlipClass {
    /// Exactly one flipped coordinate: the class where the translated-
    /// rectangle factorization geometry exists.
    pub fn is_single_flip(&self) -> bool {
        self.flip_set.len() == 1
    }

    pub fn flip_index(&self) -> Option<usize> {
        self.is_single_flip().then(|| self.flip_set[0])
    }
}

impl MonomialCurve {
    pub fn new(beta: [f64; 2], eps: [i8; 2], delta: [i8; 2]) -> Result<Self> {
        for b in beta {
            if !(b > 0.0) {
                return Err(Error::InvalidCurve(format!("exponents must be positive, got {beta:?}")));
            }
        }
        for s in eps.iter().chain(delta.iter()) {
            if *s != 1 && *s != -1 {
                return Err(Error::InvalidCurve(format!("signs must be +-1, got eps {eps:?} delta {delta:?}")));
            }
        }
        if eps == delta {
            return Err(Error::InvalidCurve(
                "at least one coordinate must change sign across t = 0".into(),
            ));
        }
        Ok(MonomialCurve { beta, eps, delta })
    }

    /// The parabola `t -> (t, t^2)`.
    pub fn parabola() -> Self {
        MonomialCurve {
            beta: [1.0, 2.0],
            eps: [1, 1],
            delta: [-1, 1],
        }
    }

    fn signs(&self, t: f64) -> [i8; 2] {
        if t > 0.0 {
            self.eps
        } else {
            self.delta
        }
    }

    pub fn eval(&self, t: f64) -> Point {
        let s = self.signs(t);
        let a = t.abs();
        [
            s[0] as f64 * pow_pos(a, self.beta[0]),
            s[1] as f64 * pow_pos(a, self.beta[1]),
        ]
    }

    /// Componentwise derivative of the active branch.
    ///
    /// At `t = 0` the right-branch limit is used; exponents below 1 have no
    /// derivative there and are rejected.
    pub fn derivative(&self, t: f64) -> Result<Point> {
        if t == 0.0 && self.beta.iter().any(|&b| b < 1.0) {
            return Err(Error::InvalidCurve(
                "derivative undefined at t = 0 for exponents below 1".into(),
            ));
        }
        let s = self.signs(if t == 0.0 { 1.0 } else { t });
        let a = t.abs();
        let mut d = [0.0; 2];
        for i in 0..2 {
            let b = self.beta[i];
            let mag = b * pow_pos(a, b - 1.0);
            // d/dt |t|^b = sign(t) * b * |t|^{b-1}
            d[i] = s[i] as f64 * mag * if t < 0.0 { -1.0 } else { 1.0 };
        }
        Ok(d)
    }

    pub fn flip_class(&self) -> FlipClass {
        let mut flip = Vec::new();
        let mut fixed = Vec::new();
        for i in 0..2 {
            if self.eps[i] != self.delta[i] {
                flip.push(i);
            } else {
                fixed.push(i);
            }
        }
        FlipClass {
            flip_set: flip,
            fixed_set: fixed,
        }
    }

    /// Sum of the exponents, `|beta|`.
    pub fn beta_sum(&self) -> f64 {
        self.beta[0] + self.beta[1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_is_exact() {
        let c = MonomialCurve::parabola();
        for &t in &[2.0, -3.0, 0.0, 0.1, -17.25, 1e6] {
            assert_eq!(c.eval(t), [t, t * t]);
        }
        assert_eq!(c.eval(2.0), [2.0, 4.0]);
        assert_eq!(c.eval(-3.0), [-3.0, 9.0]);
    }

    #[test]
    fn branch_formula() {
        let c = MonomialCurve::new([1.0, 3.0], [1, 1], [1, -1]).unwrap();
        assert_eq!(c.eval(-2.0), [2.0, -8.0]);
    }

    #[test]
    fn derivatives() {
        let c = MonomialCurve::parabola();
        assert_eq!(c.derivative(5.0).unwrap(), [1.0, 10.0]);
        assert_eq!(c.derivative(-5.0).unwrap(), [1.0, -10.0]);
        for i in 0..=10 {
            let t = 10.0 + 0.1 * i as f64;
            let d2 = c.derivative(t).unwrap()[1].abs();
            assert!((20.0..=22.0).contains(&d2));
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let c = MonomialCurve::new([1.5, 2.5], [1, -1], [-1, -1]).unwrap();
        let h = 1e-6;
        for &t in &[0.1, 0.7, -0.4, 3.0, -8.5] {
            let d = c.derivative(t).unwrap();
            for i in 0..2 {
                let fd = (c.eval(t + h)[i] - c.eval(t - h)[i]) / (2.0 * h);
                let denom = d[i].abs().max(1e-12);
                assert!(
                    ((d[i] - fd) / denom).abs() <= 1e-5,
                    "t={t} i={i} d={} fd={fd}",
                    d[i]
                );
            }
        }
    }

    #[test]
    fn flip_classes() {
        let parab = MonomialCurve::parabola().flip_class();
        assert_eq!(parab.flip_set, vec![0]);
        assert_eq!(parab.fixed_set, vec![1]);
        assert!(parab.is_single_flip());

        let both = MonomialCurve::new([1.0, 2.0], [1, 1], [-1, -1]).unwrap();
        assert!(!both.flip_class().is_single_flip());

        let second = MonomialCurve::new([1.0, 2.0], [1, 1], [1, -1]).unwrap();
        assert_eq!(second.flip_class().flip_index(), Some(1));
    }

    #[test]
    fn rejects_equal_sign_tuples() {
        assert!(MonomialCurve::new([1.0, 2.0], [1, 1], [1, 1]).is_err());
        assert!(MonomialCurve::new([0.0, 2.0], [1, 1], [-1, 1]).is_err());
    }

    #[test]
    fn positive_branch_formula_property() {
        let curves = [
            MonomialCurve::parabola(),
            MonomialCurve::new([1.0, 3.0], [1, 1], [1, -1]).unwrap(),
            MonomialCurve::new([0.5, 2.0], [-1, 1], [1, 1]).unwrap(),
        ];
        for c in curves {
            for i in 1..50 {
                let t = 0.07 * i as f64;
                let p = c.eval(t);
                for k in 0..2 {
                    let expect = c.eps[k] as f64 * pow_pos(t, c.beta[k]);
                    assert_eq!(p[k], expect);
                }
            }
        }
    }
}
