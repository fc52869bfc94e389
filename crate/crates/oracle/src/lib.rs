//! Brute-force reference checkers for the frame library's test suite.
//!
//! Nothing here calls into the library under test. Inputs are raw complex
//! matrices; orthonormal bases come from modified Gram-Schmidt, projections
//! from QR least squares, and extremes from random sampling followed by
//! power or inverse iteration started at the best sample.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Mat = DMatrix<Complex64>;
pub type Vect = DVector<Complex64>;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            seed: 0,
            tolerance: 1e-10,
        }
    }
}

impl OracleConfig {
    pub fn new(n_samples: usize, seed: u64, tolerance: f64) -> Self {
        assert!(n_samples >= 1, "n_samples must be at least 1");
        Self {
            n_samples,
            seed,
            tolerance,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A member subspace (spanning columns) and its weight.
#[derive(Clone, Debug)]
pub struct OracleMember {
    pub basis: Mat,
    pub weight: f64,
}

fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vect {
    loop {
        let v = Vect::from_fn(n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        });
        let norm = v.norm();
        if norm > 1e-12 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// Modified Gram-Schmidt with re-orthogonalisation; columns whose residual
/// falls below `tol * max column norm` are dropped.
pub fn orthonormal_basis(m: &Mat, tol: f64) -> Mat {
    let scale = m.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut cols: Vec<Vect> = Vec::new();
    for c in m.column_iter() {
        let mut v: Vect = c.into_owned();
        for _ in 0..2 {
            for q in &cols {
                let r = q.dotc(&v);
                v -= q * r;
            }
        }
        let norm = v.norm();
        if norm > tol * scale.max(f64::MIN_POSITIVE) {
            cols.push(v / Complex64::new(norm, 0.0));
        }
    }
    if cols.is_empty() {
        return Mat::zeros(m.nrows(), 0);
    }
    Mat::from_columns(&cols)
}

fn independent_columns(basis: &Mat) -> Vec<Vect> {
    let mut keep: Vec<Vect> = Vec::new();
    for c in basis.column_iter() {
        let trial: Vec<Vect> = keep.iter().cloned().chain(std::iter::once(c.into_owned())).collect();
        if orthonormal_basis(&Mat::from_columns(&trial), 1e-10).ncols() == trial.len() {
            keep = trial;
        }
    }
    keep
}

/// Thin `Q` factor of the QR factorisation of an independent spanning set.
fn qr_range(basis: &Mat) -> Mat {
    let keep = independent_columns(basis);
    if keep.is_empty() {
        return Mat::zeros(basis.nrows(), 0);
    }
    Mat::from_columns(&keep).qr().q()
}

/// Nearest point of `span(basis)` to `x`: least squares through a QR
/// factorisation of an independent set of spanning columns.
pub fn projection_oracle(basis: &Mat, x: &Vect) -> Vect {
    let keep = independent_columns(basis);
    if keep.is_empty() {
        return Vect::zeros(x.len());
    }
    let b = Mat::from_columns(&keep);
    let qr = b.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let rhs = q.adjoint() * x;
    let coeffs = r.solve_upper_triangular(&rhs).expect("independent columns");
    b * coeffs
}

/// Members with precomputed range factors.
struct Prepared {
    qs: Vec<(Mat, f64)>,
}

impl Prepared {
    fn new(members: &[OracleMember]) -> Self {
        Self {
            qs: members.iter().map(|m| (qr_range(&m.basis), m.weight)).collect(),
        }
    }

    fn quotient(&self, j: &Mat, f: &Vect) -> f64 {
        let jf = j * f;
        let num: f64 = self
            .qs
            .iter()
            .map(|(q, w)| w * w * form(j, &(q * (q.adjoint() * &jf)), f).re)
            .sum();
        num / form(j, f, f).re
    }

    fn project(&self, i: usize, x: &Vect) -> Vect {
        let q = &self.qs[i].0;
        q * (q.adjoint() * x)
    }
}

fn form(j: &Mat, x: &Vect, y: &Vect) -> Complex64 {
    y.dotc(&(j * x))
}

/// `sum v_i^2 [pi_{W_i} J f, f] / [f, f]` evaluated term by term.
pub fn frame_quotient(j: &Mat, members: &[OracleMember], f: &Vect) -> f64 {
    let jf = j * f;
    let num: f64 = members
        .iter()
        .map(|m| m.weight * m.weight * form(j, &projection_oracle(&m.basis, &jf), f).re)
        .sum();
    num / form(j, f, f).re
}

fn span_of(members: &[OracleMember]) -> Mat {
    let cols: Vec<Vect> = members
        .iter()
        .flat_map(|m| m.basis.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
        .collect();
    orthonormal_basis(&Mat::from_columns(&cols), 1e-10)
}

/// Quotients at `cfg.n_samples` random unit vectors of `M = span(members)`.
pub fn sample_quotients(j: &Mat, members: &[OracleMember], cfg: &OracleConfig) -> Vec<f64> {
    let u = span_of(members);
    let prep = Prepared::new(members);
    let mut rng = cfg.rng();
    (0..cfg.n_samples)
        .map(|_| prep.quotient(j, &(&u * unit_vector(&mut rng, u.ncols()))))
        .collect()
}

/// Power iteration for the dominant eigenvector of `a` from `x0`.
fn power_iterate(a: &Mat, x0: &Vect, steps: usize) -> Vect {
    let mut x = x0.clone();
    for _ in 0..steps {
        let y = a * &x;
        let norm = y.norm();
        if norm == 0.0 {
            break;
        }
        x = y / Complex64::new(norm, 0.0);
    }
    x
}

/// `(min, max)` of the quotient over `M = span(members)`, all members of one
/// sign. Sampling plus power iteration on `D^-1 N` and `N^-1 D` in
/// coordinates of `M`; every reported value is a quotient actually attained.
pub fn rayleigh_extremes(j: &Mat, members: &[OracleMember], cfg: &OracleConfig) -> (f64, f64) {
    let u = span_of(members);
    let k = u.ncols();
    let prep = Prepared::new(members);
    let mut rng = cfg.rng();
    let mut best_lo = (f64::INFINITY, Vect::zeros(k));
    let mut best_hi = (f64::NEG_INFINITY, Vect::zeros(k));
    for _ in 0..cfg.n_samples {
        let c = unit_vector(&mut rng, k);
        let q = prep.quotient(j, &(&u * &c));
        if q < best_lo.0 {
            best_lo = (q, c.clone());
        }
        if q > best_hi.0 {
            best_hi = (q, c);
        }
    }
    // Compressed forms on M, assembled column by column from the oracle
    // projection.
    let ju = j * &u;
    let mut n = Mat::zeros(k, k);
    for (i, m) in members.iter().enumerate() {
        let p = Mat::from_columns(
            &ju.column_iter()
                .map(|c| prep.project(i, &c.into_owned()))
                .collect::<Vec<_>>(),
        );
        n += (ju.adjoint() * p) * Complex64::new(m.weight * m.weight, 0.0);
    }
    let d = u.adjoint() * &ju;
    // [f, f] has one sign on M; flip so the denominator is positive.
    let s = if d.trace().re >= 0.0 { 1.0 } else { -1.0 };
    let d = &d * Complex64::new(s, 0.0);
    let n = &n * Complex64::new(s, 0.0);
    let steps = 500;
    if let Some(di) = d.clone().try_inverse() {
        // Signed quotient = s * (generalised eigenvalue); largest s-value is
        // the max for s = +1 and the min for s = -1.
        let top = power_iterate(&(&di * &n), &best_hi.1, steps);
        let q = prep.quotient(j, &(&u * &top));
        if s > 0.0 {
            best_hi.0 = best_hi.0.max(q);
        } else {
            best_lo.0 = best_lo.0.min(q);
        }
    }
    if let Some(ni) = n.clone().try_inverse() {
        let start = if s > 0.0 { &best_lo.1 } else { &best_hi.1 };
        let bottom = power_iterate(&(&ni * &d), start, steps);
        let q = prep.quotient(j, &(&u * &bottom));
        if s > 0.0 {
            best_lo.0 = best_lo.0.min(q);
        } else {
            best_hi.0 = best_hi.0.max(q);
        }
    }
    (best_lo.0, best_hi.0)
}

/// Upper approximation of the reduced minimum modulus: `min ||T x||` over
/// sampled unit `x` in `N(T)^perp = R(T*)`, refined by inverse iteration on
/// the compression of `T* T`.
pub fn gamma_oracle(t: &Mat, cfg: &OracleConfig) -> f64 {
    let v = orthonormal_basis(&t.adjoint(), cfg.tolerance.max(1e-12));
    if v.ncols() == 0 {
        return 0.0;
    }
    let tv = t * &v;
    let mut rng = cfg.rng();
    let mut best = (f64::INFINITY, Vect::zeros(v.ncols()));
    for _ in 0..cfg.n_samples {
        let c = unit_vector(&mut rng, v.ncols());
        let val = (&tv * &c).norm();
        if val < best.0 {
            best = (val, c);
        }
    }
    let g = tv.adjoint() * &tv;
    if let Some(gi) = g.try_inverse() {
        let c = power_iterate(&gi, &best.1, 500);
        best.0 = best.0.min((&tv * &c).norm() / c.norm());
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> Mat {
        Mat::from_row_iterator(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    fn rvec(data: &[f64]) -> Vect {
        Vect::from_iterator(data.len(), data.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn projection_cases() {
        let w = real(3, 1, &[0.0, 1.0, 0.5]);
        let p = projection_oracle(&w, &rvec(&[1.0, 1.0, 1.0]));
        assert!((p - rvec(&[0.0, 1.2, 0.6])).norm() < 1e-14);
        let x = rvec(&[0.0, 2.0, 1.0]);
        assert!((projection_oracle(&w, &x) - &x).norm() < 1e-14);
        assert!(projection_oracle(&w, &rvec(&[1.0, 0.0, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn gamma_cases() {
        let cfg = OracleConfig::new(1000, 1, 1e-10);
        assert!((gamma_oracle(&Mat::identity(3, 3), &cfg) - 1.0).abs() < 1e-12);
        let d = real(3, 3, &[3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        assert!((gamma_oracle(&d, &cfg) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn axis_frame_quotients() {
        let j = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let plus = [OracleMember {
            basis: real(2, 1, &[1.0, 0.0]),
            weight: 2.0,
        }];
        let minus = [OracleMember {
            basis: real(2, 1, &[0.0, 1.0]),
            weight: 3.0,
        }];
        let cfg = OracleConfig::new(100, 0, 1e-10);
        let (lo, hi) = rayleigh_extremes(&j, &plus, &cfg);
        assert!((lo - 4.0).abs() < 1e-12 && (hi - 4.0).abs() < 1e-12);
        let (lo, hi) = rayleigh_extremes(&j, &minus, &cfg);
        assert!((lo + 9.0).abs() < 1e-12 && (hi + 9.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_quotients_are_one() {
        let j = Mat::identity(3, 3);
        let members = [
            OracleMember {
                basis: real(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
                weight: 1.0,
            },
            OracleMember {
                basis: real(3, 1, &[0.0, 0.0, 1.0]),
                weight: 1.0,
            },
        ];
        let qs = sample_quotients(&j, &members, &OracleConfig::new(50, 3, 1e-10));
        assert!(qs.iter().all(|q| (q - 1.0).abs() < 1e-12));
    }
}
