//! Evaluable scalar fields on the plane.
//!
//! A [`ScalarField`] is a deterministic complex-valued function of a point
//! together with a conservative support hint and an optional bound on its
//! magnitude. All transform machinery consumes fields through this type, so
//! nested definitions (quotients of transforms, weighted traces, residuals)
//! stay lazily evaluable. Fields are immutable and cheap to clone; caches
//! attached by [`memoize`]/[`memoize_bilinear`] are internally synchronized.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::Point;

/// Axis-aligned bounding box; sides may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl BBox {
    pub fn new(x: [f64; 2], y: [f64; 2]) -> Self {
        BBox { x, y }
    }

    pub fn contains(&self, p: Point) -> bool {
        p[0] >= self.x[0] && p[0] <= self.x[1] && p[1] >= self.y[0] && p[1] <= self.y[1]
    }

    pub fn hull(&self, o: &BBox) -> BBox {
        BBox {
            x: [self.x[0].min(o.x[0]), self.x[1].max(o.x[1])],
            y: [self.y[0].min(o.y[0]), self.y[1].max(o.y[1])],
        }
    }

    /// Intersection, or `None` when the boxes are disjoint.
    pub fn intersect(&self, o: &BBox) -> Option<BBox> {
        let x = [self.x[0].max(o.x[0]), self.x[1].min(o.x[1])];
        let y = [self.y[0].max(o.y[0]), self.y[1].min(o.y[1])];
        (x[0] <= x[1] && y[0] <= y[1]).then_some(BBox { x, y })
    }
}

/// Conservative support information: evaluation outside the hint yields 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportHint {
    Empty,
    Box(BBox),
    Unbounded,
}

impl SupportHint {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            SupportHint::Empty => false,
            SupportHint::Box(b) => b.contains(p),
            SupportHint::Unbounded => true,
        }
    }

    pub fn union(&self, o: &SupportHint) -> SupportHint {
        match (self, o) {
            (SupportHint::Empty, x) | (x, SupportHint::Empty) => *x,
            (SupportHint::Unbounded, _) | (_, SupportHint::Unbounded) => SupportHint::Unbounded,
            (SupportHint::Box(a), SupportHint::Box(b)) => SupportHint::Box(a.hull(b)),
        }
    }

    pub fn intersection(&self, o: &SupportHint) -> SupportHint {
        match (self, o) {
            (SupportHint::Empty, _) | (_, SupportHint::Empty) => SupportHint::Empty,
            (SupportHint::Unbounded, x) | (x, SupportHint::Unbounded) => *x,
            (SupportHint::Box(a), SupportHint::Box(b)) => match a.intersect(b) {
                Some(c) => SupportHint::Box(c),
                None => SupportHint::Empty,
            },
        }
    }
}

type Evaluator = dyn Fn(Point) -> Result<Complex64> + Send + Sync;

/// A deterministic complex-valued function on the plane.
#[derive(Clone)]
pub struct ScalarField {
    eval: Arc<Evaluator>,
    support: SupportHint,
    sup_hint: Option<f64>,
    label: Arc<str>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("sup_hint", &self.sup_hint)
            .finish()
    }
}

impl ScalarField {
    pub fn new(
        label: impl Into<String>,
        support: SupportHint,
        sup_hint: Option<f64>,
        eval: impl Fn(Point) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        ScalarField {
            eval: Arc::new(eval),
            support,
            sup_hint,
            label: label.into().into(),
        }
    }

    /// Field from a plain complex function with unbounded support.
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, SupportHint::Unbounded, None, move |p| Ok(f(p)))
    }

    /// Field from a real-valued function with unbounded support.
    pub fn from_real_fn(
        label: impl Into<String>,
        f: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::from_fn(label, move |p| Complex64::new(f(p), 0.0))
    }

    pub fn zero() -> Self {
        Self::new("0", SupportHint::Empty, Some(0.0), |_| Ok(Complex64::ZERO))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(
            format!("const({c})"),
            SupportHint::Unbounded,
            Some(c.norm()),
            move |_| Ok(c),
        )
    }

    pub fn eval(&self, p: Point) -> Result<Complex64> {
        if !self.support.contains(p) {
            return Ok(Complex64::ZERO);
        }
        (self.eval)(p)
    }

    pub fn support_hint(&self) -> SupportHint {
        self.support
    }

    pub fn sup_hint(&self) -> Option<f64> {
        self.sup_hint
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into().into();
        self
    }

    /// Pointwise sum; support hints united conservatively.
    pub fn add(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::new(
            format!("add({}, {})", self.label, other.label),
            self.support.union(&other.support),
            match (self.sup_hint, other.sup_hint) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
            move |p| Ok(a.eval(p)? + b.eval(p)?),
        )
    }

    /// Pointwise product; supports intersect.
    pub fn mul(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        let support = self.support.intersection(&other.support);
        ScalarField::new(
            format!("mul({}, {})", self.label, other.label),
            support,
            match (self.sup_hint, other.sup_hint) {
                (Some(x), Some(y)) => Some(x * y),
                _ => None,
            },
            move |p| {
                if !support.contains(p) {
                    return Ok(Complex64::ZERO);
                }
                Ok(a.eval(p)? * b.eval(p)?)
            },
        )
    }

    /// Pointwise quotient guarded by a magnitude floor on the denominator.
    ///
    /// Outside the numerator's support the quotient is 0 and the denominator
    /// is never probed; inside, a denominator with `|d| < floor` is an
    /// evaluation error carrying the offending point.
    pub fn div(&self, denom: &ScalarField, floor: f64) -> ScalarField {
        let (a, b) = (self.clone(), denom.clone());
        let support = self.support;
        ScalarField::new(
            format!("div({}, {})", self.label, denom.label),
            support,
            None,
            move |p| {
                let num = a.eval(p)?;
                if num == Complex64::ZERO {
                    return Ok(Complex64::ZERO);
                }
                let d = b.eval(p)?;
                if d.norm() < floor {
                    return Err(Error::DivisionFloor {
                        x: p[0],
                        y: p[1],
                        denom: d.norm(),
                        floor,
                    });
                }
                Ok(num / d)
            },
        )
    }

    pub fn scale(&self, s: Complex64) -> ScalarField {
        let a = self.clone();
        ScalarField::new(
            format!("scale({}, {})", self.label, s),
            if s == Complex64::ZERO { SupportHint::Empty } else { self.support },
            self.sup_hint.map(|m| m * s.norm()),
            move |p| Ok(a.eval(p)? * s),
        )
    }

    /// `f - c`; for `c != 0` the support hint becomes unbounded.
    pub fn sub_const(&self, c: Complex64) -> ScalarField {
        let a = self.clone();
        ScalarField::new(
            format!("sub_const({}, {})", self.label, c),
            if c == Complex64::ZERO { self.support } else { SupportHint::Unbounded },
            self.sup_hint.map(|m| m + c.norm()),
            move |p| Ok(a.eval(p)? - c),
        )
    }
}

/// Indicator of a closed rectangle (boundary inclusive).
pub fn make_indicator(x: [f64; 2], y: [f64; 2]) -> Result<ScalarField> {
    if !(x[1] - x[0] > 0.0) || !(y[1] - y[0] > 0.0) {
        return Err(Error::DegenerateBox(x[1] - x[0], y[1] - y[0]));
    }
    let b = BBox::new(x, y);
    Ok(ScalarField::new(
        format!("1_[{},{}]x[{},{}]", x[0], x[1], y[0], y[1]),
        SupportHint::Box(b),
        Some(1.0),
        move |p| Ok(Complex64::new(if b.contains(p) { 1.0 } else { 0.0 }, 0.0)),
    ))
}

/// Indicator of a slab `interval` in coordinate `axis`, unbounded in the other.
pub fn make_slab(axis: usize, interval: [f64; 2]) -> ScalarField {
    let b = if axis == 0 {
        BBox::new(interval, [f64::NEG_INFINITY, f64::INFINITY])
    } else {
        BBox::new([f64::NEG_INFINITY, f64::INFINITY], interval)
    };
    ScalarField::new(
        format!("slab{axis}[{},{}]", interval[0], interval[1]),
        SupportHint::Box(b),
        Some(1.0),
        move |p| Ok(Complex64::new(if b.contains(p) { 1.0 } else { 0.0 }, 0.0)),
    )
}

/// Point-quantizing memo cache: keys are grid indices at pitch `quantum`.
pub struct MemoCache {
    quantum: f64,
    store: DashMap<(i64, i64), Complex64>,
}

impl MemoCache {
    pub fn new(quantum: f64) -> Self {
        assert!(quantum > 0.0, "memo quantum must be positive");
        MemoCache {
            quantum,
            store: DashMap::new(),
        }
    }

    pub fn quantum(&self) -> f64 {
        self.quantum
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    fn key(&self, p: Point) -> (i64, i64) {
        (
            (p[0] / self.quantum).round() as i64,
            (p[1] / self.quantum).round() as i64,
        )
    }

    fn snapped(&self, key: (i64, i64)) -> Point {
        [key.0 as f64 * self.quantum, key.1 as f64 * self.quantum]
    }

    fn get_or_insert(
        &self,
        key: (i64, i64),
        f: impl FnOnce(Point) -> Result<Complex64>,
    ) -> Result<Complex64> {
        if let Some(v) = self.store.get(&key) {
            return Ok(*v);
        }
        let v = f(self.snapped(key))?;
        // Concurrent fills compute the same pure value; either insert wins.
        self.store.insert(key, v);
        Ok(v)
    }
}

/// Snap-to-grid memoization: evaluation at `x` returns `f` at the nearest
/// grid point, cached. Bit-identical on repeated evaluation.
pub fn memoize(f: &ScalarField, quantum: f64) -> ScalarField {
    let cache = Arc::new(MemoCache::new(quantum));
    let inner = f.clone();
    ScalarField::new(
        format!("memo({}, {quantum})", f.label()),
        f.support_hint(),
        f.sup_hint(),
        move |p| cache.get_or_insert(cache.key(p), |q| inner.eval(q)),
    )
}

/// Bilinear-interpolating memoization on the same grid.
///
/// Corner values are cached exactly like [`memoize`]; evaluation blends the
/// four surrounding corners, so the result is continuous and its deviation
/// from a smooth underlying field is second order in `quantum`. Intended for
/// the smooth trace integrals inside the factorization, where the grid-snap
/// discontinuities of plain memoization would dominate downstream quadrature.
pub fn memoize_bilinear(f: &ScalarField, quantum: f64) -> ScalarField {
    let cache = Arc::new(MemoCache::new(quantum));
    let inner = f.clone();
    ScalarField::new(
        format!("memo2({}, {quantum})", f.label()),
        // Interpolation reads corners up to one cell outside the support.
        match f.support_hint() {
            SupportHint::Box(b) => SupportHint::Box(BBox::new(
                [b.x[0] - quantum, b.x[1] + quantum],
                [b.y[0] - quantum, b.y[1] + quantum],
            )),
            other => other,
        },
        f.sup_hint(),
        move |p| {
            let gx = p[0] / cache.quantum();
            let gy = p[1] / cache.quantum();
            let i0 = gx.floor();
            let j0 = gy.floor();
            let fx = gx - i0;
            let fy = gy - j0;
            let (i0, j0) = (i0 as i64, j0 as i64);
            let mut corner =
                |i: i64, j: i64| cache.get_or_insert((i, j), |q| inner.eval(q));
            let v00 = corner(i0, j0)?;
            let v10 = corner(i0 + 1, j0)?;
            let v01 = corner(i0, j0 + 1)?;
            let v11 = corner(i0 + 1, j0 + 1)?;
            Ok(v00 * ((1.0 - fx) * (1.0 - fy))
                + v10 * (fx * (1.0 - fy))
                + v01 * ((1.0 - fx) * fy)
                + v11 * (fx * fy))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn indicator_values() {
        let q = make_indicator([0.0, 1.0], [0.0, 1.0]).unwrap();
        assert_eq!(q.eval([0.5, 0.5]).unwrap(), c(1.0));
        assert_eq!(q.eval([2.0, 0.0]).unwrap(), c(0.0));
        // Boundary is inclusive.
        let p = make_indicator([21.0, 22.0], [0.0, 1.0]).unwrap();
        assert_eq!(p.eval([21.5, 1.0]).unwrap(), c(1.0));
    }

    #[test]
    fn indicator_rejects_degenerate_box() {
        assert!(make_indicator([0.0, 0.0], [0.0, 1.0]).is_err());
        assert!(make_indicator([1.0, 0.0], [0.0, 1.0]).is_err());
    }

    #[test]
    fn combinators() {
        let a = make_indicator([0.0, 1.0], [0.0, 1.0]).unwrap();
        let sum = a.add(&a);
        assert_eq!(sum.eval([0.5, 0.5]).unwrap(), c(2.0));

        let b = make_indicator([2.0, 3.0], [2.0, 3.0]).unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.support_hint(), SupportHint::Empty);
        assert_eq!(prod.eval([0.5, 0.5]).unwrap(), c(0.0));
        assert_eq!(prod.eval([2.5, 2.5]).unwrap(), c(0.0));

        let half = ScalarField::constant(c(0.5));
        let quot = a.div(&half, 1e-6);
        assert_eq!(quot.eval([0.5, 0.5]).unwrap(), c(2.0));
    }

    #[test]
    fn div_floor_fires_only_below_floor() {
        let a = make_indicator([0.0, 1.0], [0.0, 1.0]).unwrap();
        let d = ScalarField::from_real_fn("x1", |p| p[0]);
        let quot = a.div(&d, 1e-3);
        assert!(quot.eval([0.5, 0.5]).is_ok());
        match quot.eval([1e-4, 0.5]) {
            Err(Error::DivisionFloor { x, .. }) => assert_eq!(x, 1e-4),
            other => panic!("expected division floor error, got {other:?}"),
        }
        // Outside the numerator support the denominator is never probed.
        assert_eq!(quot.eval([-1.0, 0.5]).unwrap(), c(0.0));
    }

    #[test]
    fn memoize_quantizes_and_repeats() {
        let f = ScalarField::from_real_fn("x1", |p| p[0]);
        let m = memoize(&f, 1e-6);
        let v = m.eval([0.1234567, 0.0]).unwrap();
        assert!((v.re - 0.1234567).abs() <= 1e-6);
        let v2 = m.eval([0.1234567, 0.0]).unwrap();
        assert_eq!(v.re.to_bits(), v2.re.to_bits());

        let k = memoize(&ScalarField::constant(c(3.0)), 0.5);
        assert_eq!(k.eval([17.3, -2.1]).unwrap(), c(3.0));
    }

    #[test]
    fn memoize_bilinear_is_second_order() {
        let f = ScalarField::from_real_fn("smooth", |p| (p[0] * 1.3).sin() * (p[1] * 0.7).cos());
        let m = memoize_bilinear(&f, 1e-3);
        let mut worst: f64 = 0.0;
        for i in 0..40 {
            let p = [0.1 + 0.013 * i as f64, 0.2 + 0.029 * i as f64];
            let d = (m.eval(p).unwrap() - f.eval(p).unwrap()).norm();
            worst = worst.max(d);
        }
        // Error ~ quantum^2 * curvature; 1e-6 pitch-squared with slack.
        assert!(worst < 5e-6, "bilinear memo error {worst}");
    }

    #[test]
    fn support_soundness_random_probes() {
        let a = make_indicator([0.0, 1.0], [2.0, 5.0]).unwrap();
        let m = memoize_bilinear(&a, 1e-2);
        for i in 0..200 {
            let t = i as f64 * 0.37;
            let p = [8.0 + t.sin() * 3.0, -4.0 - t.cos().abs()];
            assert!(!a.support_hint().contains(p));
            assert_eq!(a.eval(p).unwrap(), c(0.0));
            assert_eq!(m.eval(p).unwrap(), c(0.0));
        }
    }
}
