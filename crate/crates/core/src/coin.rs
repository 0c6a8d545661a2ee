//! Position-dependent coin fields and their Euler factorization.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{cis, dense_limit, ComplexMatrix, Mat2, C64};
use crate::tol;

/// One 2×2 unitary per position, `coins[k]` acting on position `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinField {
    n: usize,
    coins: Vec<Mat2>,
}

impl CoinField {
    pub fn new(n: usize, coins: Vec<Mat2>) -> Result<Self> {
        if coins.len() != 1 << n {
            return Err(Error::SizeMismatch(format!(
                "{} coins supplied for n = {n}, expected {}",
                coins.len(),
                1usize << n
            )));
        }
        for c in &coins {
            let d = c.unitarity_defect();
            if !c.is_finite() || d > tol::UNITARY {
                return Err(Error::NotUnitary(d));
            }
        }
        Ok(CoinField { n, coins })
    }

    pub fn uniform(n: usize, coin: Mat2) -> Result<Self> {
        CoinField::new(n, vec![coin; 1 << n])
    }

    pub fn identity(n: usize) -> Self {
        CoinField { n, coins: vec![Mat2::identity(); 1 << n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coins.is_empty()
    }

    pub fn coin(&self, k: usize) -> &Mat2 {
        &self.coins[k]
    }

    pub fn coins(&self) -> &[Mat2] {
        &self.coins
    }

    /// Euler angles of every coin, indexed by position.
    pub fn euler_angles(&self) -> EulerAngles {
        let mut out = EulerAngles::default();
        for c in &self.coins {
            let [f0, f1, f2, f3] = euler_factorization(c);
            out.f0.push(f0);
            out.f1.push(f1);
            out.f2.push(f2);
            out.f3.push(f3);
        }
        out
    }

    /// Explicit JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CoinSpec::Explicit(ExplicitCoins { n: self.n, coins: self.coins.clone() }))
            .expect("coin field serializes")
    }

    /// Accepts the explicit form or any parametric form of [`CoinSpec`].
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CoinSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("coin spec: {e}")))?;
        spec.build()
    }
}

/// Samples of the four angle functions, `u = e^{iF0} e^{iF1 Z} e^{iF2 Y} e^{iF3 Z}`.
/// `f0` is the global phase α and `f2` the mixing angle θ; `f1 ± f3` are
/// the phases ξ and ζ of the diagonal and off-diagonal entries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub f3: Vec<f64>,
}

impl EulerAngles {
    pub fn functions(&self) -> [&[f64]; 4] {
        [&self.f0, &self.f1, &self.f2, &self.f3]
    }

    /// Shift each angle by multiples of 2π so that consecutive samples,
    /// taken in increasing dyadic coordinate, differ by at most π.
    pub fn unwrapped(&self) -> EulerAngles {
        let len = self.f0.len();
        let n = len.trailing_zeros() as usize;
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..len).collect();
            o.sort_by(|&a, &b| dyadic(a, n).total_cmp(&dyadic(b, n)));
            o
        };
        let fix = |v: &[f64]| {
            let mut out = v.to_vec();
            for w in order.windows(2) {
                let (prev, cur) = (out[w[0]], out[w[1]]);
                out[w[1]] = cur - TAU * ((cur - prev) / TAU).round();
            }
            out
        };
        EulerAngles { f0: fix(&self.f0), f1: fix(&self.f1), f2: fix(&self.f2), f3: fix(&self.f3) }
    }

    /// Largest slope of each angle function with respect to the dyadic
    /// coordinate, estimated from adjacent samples.
    pub fn sup_derivative_estimates(&self) -> [f64; 4] {
        self.functions().map(sup_derivative_estimate)
    }
}

fn dyadic(k: usize, n: usize) -> f64 {
    (0..n).filter(|p| k >> p & 1 == 1).map(|p| 0.5f64.powi(p as i32 + 1)).sum()
}

/// Estimate sup |f'| on [0, 1] from samples indexed by position: the
/// largest difference between dyadic neighbours divided by their spacing.
pub fn sup_derivative_estimate(samples: &[f64]) -> f64 {
    let len = samples.len();
    if len < 2 {
        return 0.0;
    }
    let n = len.trailing_zeros() as usize;
    let mut by_x: Vec<(f64, f64)> = (0..len).map(|k| (dyadic(k, n), samples[k])).collect();
    by_x.sort_by(|a, b| a.0.total_cmp(&b.0));
    by_x.windows(2)
        .map(|w| (w[1].1 - w[0].1).abs())
        .fold(0.0, f64::max)
        * len as f64
}

/// `Σ_p b_p 2^{-(p+1)}` over the bits `b_p` of `k`, least significant first.
pub fn dyadic_coordinate(k: usize, n: usize) -> Result<f64> {
    if n >= usize::BITS as usize || k >= 1 << n {
        return Err(Error::IndexOutOfRange { what: "k", value: k, bound: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX) });
    }
    Ok(dyadic(k, n))
}

/// K(α, θ, φ, λ) = e^{iα} [[cos θ/2, −e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]].
pub fn coin_from_k_params(alpha: f64, theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2::new(C64::new(c, 0.0), -cis(lambda) * s, cis(phi) * s, cis(phi + lambda) * c).scale(cis(alpha))
}

/// `[F0, F1, F2, F3]` with `u = e^{iF0} e^{iF1 Z} e^{iF2 Y} e^{iF3 Z}`,
/// F2 ∈ [0, π/2] and F0 ∈ (−π/2, π/2]. When F1 and F3 are not separately
/// determined, F3 = 0.
pub fn euler_factorization(u: &Mat2) -> [f64; 4] {
    let f0 = u.det().arg() / 2.0;
    let v = u.scale(cis(-f0));
    let (a, b) = (v.0[0][0], v.0[0][1]);
    let f2 = b.norm().atan2(a.norm());
    const DEGENERATE: f64 = 1e-12;
    let (f1, f3) = if b.norm() < DEGENERATE {
        (a.arg(), 0.0)
    } else if a.norm() < DEGENERATE {
        (b.arg(), 0.0)
    } else {
        let (xi, zeta) = (a.arg(), b.arg());
        ((xi + zeta) / 2.0, (xi - zeta) / 2.0)
    };
    [f0, f1, f2, f3]
}

/// Product e^{iF0} e^{iF1 Z} e^{iF2 Y} e^{iF3 Z}.
pub fn euler_reconstruct(f: [f64; 4]) -> Mat2 {
    let rzp = |t: f64| Mat2::diag(cis(t), cis(-t));
    let (s, c) = f[2].sin_cos();
    let y = Mat2::new(C64::new(c, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(c, 0.0));
    (rzp(f[1]) * y * rzp(f[3])).scale(cis(f[0]))
}

/// Block-diagonal total coin on the walk layout (basis index `2k + c`).
pub fn total_coin_matrix(field: &CoinField) -> Result<ComplexMatrix> {
    let qubits = field.n + 1;
    if qubits > dense_limit() {
        return Err(Error::DenseLimitExceeded { qubits, limit: dense_limit() });
    }
    Ok(ComplexMatrix::block_diag2(&field.coins))
}

/// (α, θ, φ, λ) with α, θ ∈ [0, π) and φ, λ ∈ [−π, π), drawn from ChaCha20
/// seeded by `seed` in position order.
pub fn random_params(n: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..1usize << n)
        .map(|_| {
            let alpha = rng.gen_range(0.0..PI);
            let theta = rng.gen_range(0.0..PI);
            let phi = rng.gen_range(-PI..PI);
            let lambda = rng.gen_range(-PI..PI);
            [alpha, theta, phi, lambda]
        })
        .collect()
}

pub fn random_field(n: usize, seed: u64) -> CoinField {
    field_from_params(n, &random_params(n, seed)).expect("K-parametrized coins are unitary")
}

pub fn field_from_params(n: usize, params: &[[f64; 4]]) -> Result<CoinField> {
    let coins = params.iter().map(|p| coin_from_k_params(p[0], p[1], p[2], p[3])).collect();
    CoinField::new(n, coins)
}

/// Rows (α, θ, φ, λ) of the reference n = 3 coin set.
pub const REFERENCE_COINS: [[f64; 4]; 8] = [
    [2.79345642, 2.04965065, -1.40857922, -0.92367785],
    [1.06079763, 0.78803616, 2.65787445, -2.41605216],
    [1.37954004, 2.33616145, 1.80543107, 1.62653295],
    [2.19632113, 0.83464054, -0.6205838, -2.18954578],
    [1.68034403, 0.14646079, -1.58351372, 0.15425736],
    [1.87405243, 2.83703533, 1.81087703, -2.22138109],
    [1.10728697, 2.5120075, 0.46211176, 1.15354949],
    [1.97339916, 0.5405225, 2.67464114, -1.52776719],
];

pub fn reference_field() -> CoinField {
    field_from_params(3, &REFERENCE_COINS).expect("reference coins are unitary")
}

/// How a position index becomes the argument of the Dirac potential.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordinateMap {
    /// x_k = k / 2^n, inside [0, 1].
    #[default]
    Normalized,
    /// x_k = k·a.
    Lattice,
}

impl CoordinateMap {
    pub fn coordinate(self, k: usize, n: usize, step: f64) -> f64 {
        match self {
            CoordinateMap::Normalized => k as f64 / (1u64 << n) as f64,
            CoordinateMap::Lattice => k as f64 * step,
        }
    }
}

/// Parameters of the Dirac coin e^{−iqV(x_k)a}·Rx(−2ma) with V(x) = V0 (x − 1/2)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracParams {
    pub n: usize,
    pub mass: f64,
    pub step: f64,
    pub charge: f64,
    #[serde(rename = "V0", alias = "v0")]
    pub v0: f64,
    #[serde(default)]
    pub coordinate_map: CoordinateMap,
}

impl DiracParams {
    pub fn potential(&self, x: f64) -> f64 {
        self.v0 * (x - 0.5).powi(2)
    }

    /// The phase −qV(x_k)a at every position.
    pub fn phases(&self) -> Vec<f64> {
        (0..1usize << self.n)
            .map(|k| {
                let x = self.coordinate_map.coordinate(k, self.n, self.step);
                -self.charge * self.potential(x) * self.step
            })
            .collect()
    }

    pub fn mixing(&self) -> Mat2 {
        Mat2::rx(-2.0 * self.mass * self.step)
    }

    pub fn field(&self) -> Result<CoinField> {
        if self.step.is_nan() || self.step <= 0.0 {
            return Err(Error::InvalidInput(format!("lattice step must be positive, got {}", self.step)));
        }
        let rx = self.mixing();
        CoinField::new(self.n, self.phases().into_iter().map(|ph| rx.scale(cis(ph))).collect())
    }
}

pub fn dirac_field(
    n: usize,
    mass: f64,
    step: f64,
    charge: f64,
    v0: f64,
    coordinate_map: CoordinateMap,
) -> Result<CoinField> {
    DiracParams { n, mass, step, charge, v0, coordinate_map }.field()
}

/// JSON description of a coin field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    Explicit(ExplicitCoins),
    Parametric(ParametricCoin),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitCoins {
    pub n: usize,
    pub coins: Vec<Mat2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParametricCoin {
    KParams { n: usize, params: Vec<[f64; 4]> },
    Reference,
    Dirac(DiracParams),
    Random { n: usize, seed: u64 },
}

impl CoinSpec {
    pub fn build(&self) -> Result<CoinField> {
        match self {
            CoinSpec::Explicit(e) => CoinField::new(e.n, e.coins.clone()),
            CoinSpec::Parametric(p) => match p {
                ParametricCoin::KParams { n, params } => field_from_params(*n, params),
                ParametricCoin::Reference => Ok(reference_field()),
                ParametricCoin::Dirac(d) => d.field(),
                ParametricCoin::Random { n, seed } => Ok(random_field(*n, *seed)),
            },
        }
    }

    /// Dirac parameters when this describes a Dirac coin.
    pub fn dirac(&self) -> Option<&DiracParams> {
        match self {
            CoinSpec::Parametric(ParametricCoin::Dirac(d)) => Some(d),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_examples() {
        assert_eq!(dyadic_coordinate(0, 3).unwrap(), 0.0);
        assert_eq!(dyadic_coordinate(1, 3).unwrap(), 0.5);
        assert_eq!(dyadic_coordinate(4, 3).unwrap(), 0.125);
        assert_eq!(dyadic_coordinate(8, 3).unwrap_err().code(), "index-out-of-range");
    }

    #[test]
    fn k_params_examples() {
        assert!(coin_from_k_params(0.0, 0.0, 0.0, 0.0).max_abs_diff(&Mat2::identity()) < 1e-15);
        let want = Mat2::new(C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!(coin_from_k_params(0.0, PI, 0.0, 0.0).max_abs_diff(&want) < 1e-15);
        let r = REFERENCE_COINS[4];
        assert!(coin_from_k_params(r[0], r[1], r[2], r[3]).unitarity_defect() < 1e-12);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_factorization(&Mat2::identity()), [0.0; 4]);
        let f = euler_factorization(&Mat2::diag(cis(0.3), cis(-0.3)));
        assert!(f[0].abs() < 1e-15 && f[2].abs() < 1e-15);
        assert!((f[1] + f[3] - 0.3).abs() < 1e-15);
        for c in reference_field().coins() {
            let f = euler_factorization(c);
            assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&f[2]));
            assert!(euler_reconstruct(f).max_abs_diff(c) < 1e-10);
        }
    }

    #[test]
    fn euler_degenerate_cases() {
        for u in [Mat2::x(), Mat2::y(), Mat2::z(), Mat2::h(), Mat2::rx(PI), Mat2::phase(1.0)] {
            let f = euler_factorization(&u);
            assert!(euler_reconstruct(f).max_abs_diff(&u) < 1e-12, "{u:?}");
        }
        assert_eq!(euler_factorization(&Mat2::y())[3], 0.0);
    }

    #[test]
    fn total_coin_is_block_diagonal() {
        let f = CoinField::new(1, vec![Mat2::x(), Mat2::identity()]).unwrap();
        let m = total_coin_matrix(&f).unwrap();
        let want = ComplexMatrix::block_diag2(&[Mat2::x(), Mat2::identity()]);
        assert_eq!(m, want);
        assert!(total_coin_matrix(&reference_field()).unwrap().unitarity_defect() < 1e-10);
        assert!(total_coin_matrix(&CoinField::identity(3)).unwrap() == ComplexMatrix::identity(16));
    }

    #[test]
    fn random_field_intervals_and_determinism() {
        assert_eq!(random_field(4, 11), random_field(4, 11));
        assert_ne!(random_field(4, 11), random_field(4, 12));
        for p in random_params(6, 3) {
            assert!((0.0..PI).contains(&p[0]) && (0.0..PI).contains(&p[1]));
            assert!((-PI..PI).contains(&p[2]) && (-PI..PI).contains(&p[3]));
        }
        assert!(random_field(5, 9).coins().iter().all(|c| c.unitarity_defect() < 1e-12));
    }

    #[test]
    fn dirac_reduces_to_mixing_without_potential() {
        let rx = Mat2::rx(-2.0 * 10.0 * 0.05);
        for f in [
            dirac_field(4, 10.0, 0.05, 0.0, 80.0 * PI, CoordinateMap::Normalized).unwrap(),
            dirac_field(4, 10.0, 0.05, 1.0, 0.0, CoordinateMap::Lattice).unwrap(),
        ] {
            assert!(f.coins().iter().all(|c| c.max_abs_diff(&rx) < 1e-15));
        }
        let f = dirac_field(2, 1.0, 0.5, 1.0, 2.0, CoordinateMap::Normalized).unwrap();
        let want = rx_scaled(1.0, 0.5, -(2.0 * 0.25 * 0.25) * 0.5);
        assert!(f.coin(1).max_abs_diff(&want) < 1e-15);
        assert_eq!(dirac_field(2, 1.0, 0.0, 1.0, 1.0, CoordinateMap::Normalized).unwrap_err().code(), "invalid-input");
    }

    fn rx_scaled(m: f64, a: f64, phase: f64) -> Mat2 {
        Mat2::rx(-2.0 * m * a).scale(cis(phase))
    }

    #[test]
    fn json_forms() {
        let f = random_field(2, 1);
        assert_eq!(CoinField::from_json(&f.to_json()).unwrap().coins().len(), 4);
        let g = CoinField::from_json(&f.to_json()).unwrap();
        assert!(g.coins().iter().zip(f.coins()).all(|(a, b)| a.max_abs_diff(b) == 0.0));
        let t = CoinField::from_json(r#"{"kind":"reference"}"#).unwrap();
        assert_eq!(t, reference_field());
        let d = CoinField::from_json(r#"{"kind":"dirac","n":6,"mass":10,"step":0.05,"charge":1,"V0":251.32741228718345}"#).unwrap();
        assert_eq!(d.n(), 6);
        let k = CoinField::from_json(r#"{"kind":"k-params","n":1,"params":[[0,0,0,0],[0,3.141592653589793,0,0]]}"#).unwrap();
        assert!(k.coin(0).max_abs_diff(&Mat2::identity()) < 1e-15);
        let bad = r#"{"n":0,"coins":[[[1,0],[0,0],[0,0],[2,0]]]}"#;
        assert_eq!(CoinField::from_json(bad).unwrap_err().code(), "not-unitary");
        assert_eq!(CoinField::from_json(r#"{"n":1,"coins":[]}"#).unwrap_err().code(), "size-mismatch");
    }

    #[test]
    fn unwrapping_keeps_reconstruction() {
        let f = random_field(4, 5);
        let e = f.euler_angles().unwrapped();
        for k in 0..16 {
            let r = euler_reconstruct([e.f0[k], e.f1[k], e.f2[k], e.f3[k]]);
            assert!(r.max_abs_diff(f.coin(k)) < 1e-10);
        }
    }
}
