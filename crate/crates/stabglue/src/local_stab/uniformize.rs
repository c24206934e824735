//! `F(z) = 1/2 + (1/√π)∫₀^z e^{−t²} dt`, the uniformising map of the slice `Σ`.
//!
//! Maclaurin series in double-double arithmetic for `|z| ≤ 4`; beyond that, Gauss–Legendre
//! quadrature along the segment from `4z/|z|` to `z`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Cplx = Complex64;

const INV_SQRT_PI: Dd = Dd {
    hi: 0.5641895835477563,
    lo: 7.66772980658294e-18,
};
const SERIES_RADIUS: f64 = 4.0;
const GL_ORDER: usize = 20;
const GL_PANELS: usize = 48;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let p = q1 * d;
        let e = q1.mul_add(d, -p);
        let r = (self.hi - p - e + self.lo) / d;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct DdC {
    re: Dd,
    im: Dd,
}

impl DdC {
    fn from(z: Cplx) -> Self {
        Self {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }

    fn add(self, o: DdC) -> DdC {
        DdC {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    fn scale(self, k: Dd) -> DdC {
        DdC {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    fn div_f64(self, d: f64) -> DdC {
        DdC {
            re: self.re.div_f64(d),
            im: self.im.div_f64(d),
        }
    }

    fn abs_approx(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    fn value(self) -> Cplx {
        Cplx::new(self.re.value(), self.im.value())
    }
}

/// `(1/√π)·Σ (−1)ⁿ z^{2n+1} / (n!(2n+1))`.
fn series_integral(z: Cplx) -> DdC {
    let zd = DdC::from(z);
    let minus_z2 = zd.mul(zd).scale(Dd::from(-1.0));
    let mut power = zd;
    let mut sum = zd;
    for n in 1..400 {
        power = power.mul(minus_z2).div_f64(n as f64);
        let term = power.div_f64((2 * n + 1) as f64);
        sum = sum.add(term);
        if term.abs_approx() <= 1e-33 * sum.abs_approx().max(1e-300) {
            break;
        }
    }
    sum.scale(INV_SQRT_PI)
}

fn gauss_legendre() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut deriv = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                deriv = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / deriv;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * deriv * deriv)));
        }
        out
    })
}

fn segment_integral(a: Cplx, b: Cplx) -> Cplx {
    let nodes = gauss_legendre();
    let h = (b - a) / GL_PANELS as f64;
    let mut total = Cplx::new(0.0, 0.0);
    for p in 0..GL_PANELS {
        let mid = a + h * (p as f64 + 0.5);
        let mut panel = Cplx::new(0.0, 0.0);
        for &(x, wgt) in nodes {
            let t = mid + h * (x / 2.0);
            panel += (-t * t).exp() * wgt;
        }
        total += panel * (h / 2.0);
    }
    total * INV_SQRT_PI.value()
}

/// `F(z) = (1 + erf z)/2`.
pub fn uniformize(z: Cplx) -> Cplx {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return series_integral(z)
            .add(DdC::from(Cplx::new(0.5, 0.0)))
            .value();
    }
    let start = z * (SERIES_RADIUS / r);
    let base = series_integral(start)
        .add(DdC::from(Cplx::new(0.5, 0.0)))
        .value();
    base + segment_integral(start, z)
}

/// `F′(z) = e^{−z²}/√π`.
pub fn uniformize_derivative(z: Cplx) -> Cplx {
    (-z * z).exp() * INV_SQRT_PI.value()
}

/// Solves `F(z) = target` by damped Newton iteration from `seed`.
pub fn uniformize_inverse(target: Cplx, seed: Cplx) -> Result<Cplx> {
    let tol = 1e-13 * target.norm().max(1.0);
    let mut z = seed;
    let mut resid = uniformize(z) - target;
    for _ in 0..200 {
        if resid.norm() <= tol {
            return Ok(z);
        }
        let d = uniformize_derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = resid / d;
        let mut lambda = 1.0;
        loop {
            let cand = z - step * lambda;
            let r = uniformize(cand) - target;
            if r.norm() < resid.norm() || lambda < 1e-6 {
                z = cand;
                resid = r;
                break;
            }
            lambda /= 2.0;
        }
    }
    if resid.norm() <= tol * 10.0 {
        return Ok(z);
    }
    Err(Error::Undecidable(format!(
        "Newton iteration for F(z) = {target} did not converge from {seed}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        assert_eq!(uniformize(Cplx::new(0.0, 0.0)), Cplx::new(0.5, 0.0));
    }

    #[test]
    fn value_at_one() {
        assert!((uniformize(Cplx::new(1.0, 0.0)).re - 0.921350396).abs() < 1e-9);
    }

    #[test]
    fn odd_symmetry() {
        for z in [
            Cplx::new(0.3, -1.2),
            Cplx::new(3.9, 0.1),
            Cplx::new(-2.0, 3.0),
            Cplx::new(4.5, 2.0),
        ] {
            let s = uniformize(z) + uniformize(-z);
            assert!(
                (s - 1.0).norm() <= 1e-12 * uniformize(z).norm().max(1.0),
                "z = {z}"
            );
        }
    }

    #[test]
    fn continuity_across_the_series_radius() {
        for arg in [0.1f64, 0.9, 1.7, 2.8] {
            let inner = Cplx::from_polar(4.0 - 1e-9, arg);
            let outer = Cplx::from_polar(4.0 + 1e-9, arg);
            let (a, b) = (uniformize(inner), uniformize(outer));
            assert!((a - b).norm() <= 1e-6 * a.norm().max(1.0));
        }
    }

    #[test]
    fn newton_inverse() {
        let z = Cplx::new(0.4, 0.7);
        let back = uniformize_inverse(uniformize(z), Cplx::new(0.3, 0.5)).unwrap();
        assert!((back - z).norm() < 1e-10);
    }
}
