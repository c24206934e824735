//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stabglue::exact::{PhaseLift, QComplex, Q};
use stabglue::glue::DoubleCoverSod;
use stabglue::klattice::KClass;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_q(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Q {
    let den = rng.random_range(1..=max_den);
    Q::new(rng.random_range(-max_num..=max_num).into(), den.into())
}

pub fn rand_c(rng: &mut impl Rng, max_num: i64, max_den: i64) -> QComplex {
    QComplex::new(rand_q(rng, max_num, max_den), rand_q(rng, max_num, max_den))
}

/// Random nonzero value in the upper half-plane or on the negative real axis.
pub fn rand_h_prime(rng: &mut impl Rng, max_num: i64, max_den: i64) -> QComplex {
    loop {
        let z = rand_c(rng, max_num, max_den);
        if !z.is_zero() && z.in_h_prime() {
            return z;
        }
    }
}

/// Class of `ζ^twist ⊗ O_{m p}` counted from its composition factors, in the one-point basis.
pub fn torsion_class(m: u32, twist: bool) -> KClass {
    let (mut plain, mut zeta) = (0i64, 0i64);
    for k in 0..m {
        if (k % 2 == 1) ^ twist {
            zeta += 1;
        } else {
            plain += 1;
        }
    }
    // [ζ⊗O_p] = v − [O_p]
    KClass {
        coords: vec![0, zeta, plain - zeta],
    }
}

/// Subobjects of `ζ^twist ⊗ O_{m p}`: the length-`k` one is `ζ^{twist + m − k} ⊗ O_{kp}`.
pub fn torsion_chain(m: u32, twist: bool) -> Vec<KClass> {
    (1..=m)
        .map(|k| torsion_class(k, twist ^ ((m - k) % 2 == 1)))
        .collect()
}

/// Phases of increments, assuming every increment lies in the heart half-plane.
fn heart_phase(z: &QComplex) -> PhaseLift {
    PhaseLift::in_heart(z).expect("increment in the upper half-plane or on R<0")
}

/// HN filtration of a chain object found by trying every set of breakpoints.
///
/// `values[k]` is the charge of the length-`k+1` chain member. Returns the factors as
/// `(start, end, phase)` index ranges into the chain (0 = zero object), asserting uniqueness.
pub fn exhaustive_hn(values: &[QComplex]) -> Vec<(usize, usize, PhaseLift)> {
    let m = values.len();
    let at = |k: usize| {
        if k == 0 {
            QComplex::zero()
        } else {
            values[k - 1].clone()
        }
    };
    let table: Vec<Vec<Option<PhaseLift>>> = (0..=m)
        .map(|a| {
            (0..=m)
                .map(|b| (a < b).then(|| heart_phase(&(&at(b) - &at(a)))))
                .collect()
        })
        .collect();
    let piece = |a: usize, b: usize| table[a][b].clone().unwrap();
    let semistable = |a: usize, b: usize| {
        let whole = piece(a, b);
        (a + 1..b).all(|k| piece(a, k) <= whole)
    };
    let mut found = Vec::new();
    for mask in 0u32..(1 << (m - 1)) {
        let mut cuts = vec![0];
        cuts.extend((1..m).filter(|k| mask & (1 << (k - 1)) != 0));
        cuts.push(m);
        let pieces: Vec<(usize, usize)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        if !pieces.iter().all(|&(a, b)| semistable(a, b)) {
            continue;
        }
        let phases: Vec<PhaseLift> = pieces.iter().map(|&(a, b)| piece(a, b)).collect();
        // Sub-first order: the first piece is the maximal-phase subobject.
        if phases.windows(2).all(|w| w[0] > w[1]) {
            found.push(
                pieces
                    .into_iter()
                    .zip(phases)
                    .map(|((a, b), p)| (a, b, p))
                    .collect::<Vec<_>>(),
            );
        }
    }
    assert_eq!(found.len(), 1, "HN filtration is not unique");
    found.pop().unwrap()
}

/// Stability of a chain object: semistable when the filtration has one piece, stable when
/// additionally no proper subobject has equal phase.
pub fn exhaustive_status(values: &[QComplex]) -> (bool, bool, Option<PhaseLift>) {
    let hn = exhaustive_hn(values);
    if hn.len() != 1 {
        return (false, false, None);
    }
    let phase = hn[0].2.clone();
    let strict = (0..values.len() - 1).any(|k| heart_phase(&values[k]) == phase);
    (true, !strict, Some(phase))
}

/// Invariant sections of `π_*(ζ^twist ⊗ O_{m p})`: basis `t^k`, `k < m`, of character `twist + k`.
fn invariant_length(m: u32, twist: bool) -> i64 {
    (0..m).filter(|k| (k % 2 == 1) == twist).count() as i64
}

/// Factor classes of a basis class under the double-cover decompositions, from adjoint functors.
///
/// The base-curve factor uses `([O_Y], [O_y])`; the point factor uses `[O_{p_i}]` or
/// `[ζ⊗O_{p_i}]`. Pullback classes project to themselves; torsion at `p_i` projects through
/// `(π_*(E(R)))^{Z₂}` for the first order and `(π_*E)^{Z₂}` for the second.
pub fn oracle_split(sod: DoubleCoverSod, n: usize, basis: usize) -> (Vec<i64>, Vec<i64>) {
    let base_part = |deg_part: i64, rank_part: i64| vec![rank_part, deg_part];
    let (base, rest): (Vec<i64>, KClass) = match basis {
        0 => (base_part(0, 1), KClass::zero(n)),
        1 => (base_part(1, 0), KClass::zero(n)),
        k => {
            let len = match sod {
                // Twisting by O(R) flips the character at the point.
                DoubleCoverSod::PullbackFirst => invariant_length(1, true),
                DoubleCoverSod::ZetaTorsionFirst => invariant_length(1, false),
            };
            let remainder = &KClass::point(n, k - 2) - &KClass::fiber(n).scale(len);
            (base_part(len, 0), remainder)
        }
    };
    let points: Vec<i64> = (0..n)
        .map(|i| match sod {
            DoubleCoverSod::PullbackFirst => rest.point_coeff(i),
            // remainder is a multiple of [ζ⊗O_{p_i}] = v − [O_{p_i}]
            DoubleCoverSod::ZetaTorsionFirst => -rest.point_coeff(i),
        })
        .collect();
    match sod {
        DoubleCoverSod::PullbackFirst => (base, points),
        DoubleCoverSod::ZetaTorsionFirst => (points, base),
    }
}

/// `F(z)` by composite Simpson quadrature of `e^{−t²}/√π` along `[0, z]`.
pub fn simpson_f(re: f64, im: f64, panels: usize) -> (f64, f64) {
    let n = panels * 2;
    let (mut sr, mut si) = (0.0, 0.0);
    for k in 0..=n {
        let s = k as f64 / n as f64;
        let (tr, ti) = (re * s, im * s);
        // e^{−t²} with t² = tr² − ti² + 2i·tr·ti
        let mag = (-(tr * tr - ti * ti)).exp();
        let ang = -2.0 * tr * ti;
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sr += w * mag * ang.cos();
        si += w * mag * ang.sin();
    }
    let h = 1.0 / n as f64 / 3.0 / std::f64::consts::PI.sqrt();
    // dt = z ds
    let (ir, ii) = (sr * h, si * h);
    (0.5 + ir * re - ii * im, ir * im + ii * re)
}
