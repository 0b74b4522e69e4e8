//! Eigenstates of the symmetrized position operator: analytic overlaps, the
//! orthonormal `xi_n` lattice, Gram matrices, Parseval sums and the unitary
//! map onto `L^2(-pi/2, pi/2)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt};
use crate::params::ModelParams;
use crate::quadrature::{inner_product, try_integrate_interval, IntegralResult, QuadratureConfig};
use crate::state::{Measure, StateSpec};

/// Below this dimensionless separation the closed forms switch to series.
pub(crate) const SERIES_SWITCH: f64 = 1e-6;

/// `sin(u)/u`, with the Taylor branch near zero.
pub(crate) fn sinc(u: f64) -> f64 {
    if u.abs() < SERIES_SWITCH {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// `xi_n = (2n + epsilon) hbar sqrt(beta)` for `n` in `n_min..=n_max`.
///
/// `epsilon = 1` and `epsilon = -1` describe the same lattice, shifted by one
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub epsilon: f64,
    pub n_min: i64,
    pub n_max: i64,
}

impl LatticeSpec {
    pub fn new(epsilon: f64, n_min: i64, n_max: i64) -> Result<Self> {
        let l = Self {
            epsilon,
            n_min,
            n_max,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && (-1.0..=1.0).contains(&self.epsilon)) {
            return Err(Error::InvalidParameter(format!(
                "lattice offset must lie in [-1, 1], got {}",
                self.epsilon
            )));
        }
        if self.n_min > self.n_max {
            return Err(Error::InvalidParameter(format!(
                "empty lattice window {}..={}",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }

    pub fn point(&self, n: i64, params: &ModelParams) -> f64 {
        (2.0 * n as f64 + self.epsilon) * params.min_length()
    }
}

/// State families that can be placed on a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SymEigen,
    KmmEigen,
    MaxLoc,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::SymEigen, Family::KmmEigen, Family::MaxLoc];

    pub fn state(self, xi: f64) -> StateSpec {
        match self {
            Family::SymEigen => StateSpec::sym_eigen(xi),
            Family::KmmEigen => StateSpec::kmm_eigen(xi),
            Family::MaxLoc => StateSpec::max_loc(xi),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SymEigen => "sym-eigen",
            Family::KmmEigen => "kmm-eigen",
            Family::MaxLoc => "max-loc",
        }
    }
}

/// Direct quadrature of one Gram entry, kept alongside the assembled matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotCheck {
    pub n: i64,
    pub n_prime: i64,
    pub direct: Complex64,
    pub assembled: Complex64,
}

impl SpotCheck {
    pub fn deviation(&self) -> f64 {
        (self.direct - self.assembled).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub lattice: LatticeSpec,
    pub family: Family,
    pub measure: Measure,
    size: usize,
    entries: Vec<Complex64>,
    errors: Vec<f64>,
    pub spot_checks: Vec<SpotCheck>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry for lattice indices `(n, n')`.
    pub fn get(&self, n: i64, n_prime: i64) -> Complex64 {
        self.entries[self.offset(n, n_prime)]
    }

    pub fn error(&self, n: i64, n_prime: i64) -> f64 {
        self.errors[self.offset(n, n_prime)]
    }

    fn offset(&self, n: i64, n_prime: i64) -> usize {
        let i = (n - self.lattice.n_min) as usize;
        let j = (n_prime - self.lattice.n_min) as usize;
        assert!(
            i < self.size && j < self.size,
            "index outside lattice window"
        );
        i * self.size + j
    }

    /// `max |G - I|` over all entries.
    pub fn max_deviation_from_identity(&self) -> f64 {
        self.iter()
            .map(|(n, m, v)| (v - if n == m { 1.0 } else { 0.0 }).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.iter()
            .filter(|(n, m, _)| n != m)
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_spot_deviation(&self) -> f64 {
        self.spot_checks
            .iter()
            .map(SpotCheck::deviation)
            .fold(0.0, f64::max)
    }

    /// `(n, n', value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let n0 = self.lattice.n_min;
        let size = self.size;
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, &v)| (n0 + (k / size) as i64, n0 + (k % size) as i64, v))
    }
}

/// Closed-form overlap of two symmetrized eigenstates,
/// `(2 hbar sqrt(beta) / (pi d)) sin(d pi / (2 hbar sqrt(beta)))` with `d = xi' - xi`.
pub fn eigen_overlap_analytic(xi: f64, xi_prime: f64, params: &ModelParams) -> f64 {
    let u = (xi_prime - xi) * PI / (2.0 * params.min_length());
    sinc(u)
}

/// Gram matrix of a state family on a lattice window.
///
/// Entries depend only on `n' - n`, so one row is integrated and the rest
/// filled by conjugate symmetry. Ten randomly chosen entries (fixed seed) are
/// then integrated directly and stored in `spot_checks`.
pub fn gram_matrix(
    lattice: &LatticeSpec,
    family: Family,
    measure: Measure,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<GramMatrix> {
    lattice.validate()?;
    let size = lattice.len();
    let n0 = lattice.n_min;
    let entry = |n: i64, m: i64| {
        inner_product(
            &family.state(lattice.point(n, params)),
            &family.state(lattice.point(m, params)),
            measure,
            params,
            cfg,
        )
        .context_with(|| format!("Gram entry (n, n') = ({n}, {m})"))
    };

    let row: Vec<IntegralResult> = (0..size as i64)
        .into_par_iter()
        .map(|k| entry(n0, n0 + k))
        .collect::<Result<_>>()?;

    let mut entries = vec![Complex64::new(0.0, 0.0); size * size];
    let mut errors = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            let r = if j >= i {
                row[j - i].value
            } else {
                row[i - j].value.conj()
            };
            entries[i * size + j] = if i == j { Complex64::new(r.re, 0.0) } else { r };
            errors[i * size + j] = row[i.abs_diff(j)].error_estimate;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6a11_c0de);
    let picks: Vec<(i64, i64)> = (0..10.min(size * size))
        .map(|_| {
            (
                n0 + rng.gen_range(0..size) as i64,
                n0 + rng.gen_range(0..size) as i64,
            )
        })
        .collect();
    let spot_checks = picks
        .into_par_iter()
        .map(|(n, m)| {
            let direct = entry(n, m)?.value;
            Ok(SpotCheck {
                n,
                n_prime: m,
                direct,
                assembled: entries[(n - n0) as usize * size + (m - n0) as usize],
            })
        })
        .collect::<Result<_>>()?;

    Ok(GramMatrix {
        lattice: *lattice,
        family,
        measure,
        size,
        entries,
        errors,
        spot_checks,
    })
}

/// Offset `epsilon` in `[-1, 1]` of `xi` relative to the lattice `2n hbar sqrt(beta)`.
pub fn reduced_offset(xi: f64, params: &ModelParams) -> f64 {
    let u = xi / params.min_length();
    u - 2.0 * (0.5 * u).round()
}

/// Truncated Parseval sum of a state `psi_xi` over the basis
/// `{psi_(2n hbar sqrt(beta))}`, keeping `|m| <= truncation`.
pub fn parseval_sum(target_xi: f64, truncation: u64, params: &ModelParams) -> f64 {
    parseval_sum_for_offset(reduced_offset(target_xi, params), truncation)
}

/// `sum_{|m| <= N} (4/pi^2) sin^2((2m+eps) pi/2) / (2m+eps)^2`, added in the
/// order `m = 0, -1, 1, -2, 2, ...` so that each truncation is a prefix of the
/// next.
pub fn parseval_sum_for_offset(epsilon: f64, truncation: u64) -> f64 {
    let mut sum = parseval_term(epsilon, 0);
    for m in 1..=truncation as i64 {
        sum += parseval_term(epsilon, -m);
        sum += parseval_term(epsilon, m);
    }
    sum
}

/// One squared overlap. For integer `m`, `sin^2((2m+eps) pi/2) = sin^2(eps pi/2)`,
/// so every term with `m != 0` vanishes identically at `eps = 0`.
pub fn parseval_term(epsilon: f64, m: i64) -> f64 {
    if m == 0 {
        let s = sinc(epsilon * FRAC_PI_2);
        return s * s;
    }
    let v = 2.0 * m as f64 + epsilon;
    let s = (epsilon * FRAC_PI_2).sin();
    4.0 / (PI * PI) * s * s / (v * v)
}

/// `U(f)(t) = beta^(-1/4) sec(t) f(tan(t)/sqrt(beta))`.
pub fn unitary_map_image(f: &StateSpec, params: &ModelParams, t: f64) -> Result<Complex64> {
    if !(t.abs() < FRAC_PI_2) {
        return Err(Error::Domain {
            what: "unitary_map_image",
            value: t,
            domain: "|t| < pi/2",
        });
    }
    let p = t.tan() / params.sqrt_beta();
    Ok(f.evaluate(params, p)? * (params.beta().powf(-0.25) / t.cos()))
}

/// Plane wave `exp(-i xi t / (hbar sqrt(beta))) / sqrt(pi)`, the image of `psi_xi`.
pub fn plane_wave(xi: f64, t: f64, params: &ModelParams) -> Complex64 {
    Complex64::cis(-xi * t / params.min_length()) / PI.sqrt()
}

/// `(<Uf, Ug>` over `(-pi/2, pi/2)`, `<f, g>` over the real line`)`.
pub fn verify_isometry(
    f: &StateSpec,
    g: &StateSpec,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<(IntegralResult, IntegralResult)> {
    let (t0, t1) = angle_range(f, g, params)?;
    let hint = match (f.xi(), g.xi()) {
        (Some(a), Some(b)) => Some((a - b).abs() / params.min_length()),
        _ => None,
    };
    let tcfg = QuadratureConfig {
        oscillation_hint: hint,
        ..*cfg
    };
    let breaks: Vec<f64> = f
        .features()
        .into_iter()
        .chain(g.features())
        .map(|p| (params.sqrt_beta() * p).atan())
        .collect();
    let mapped = try_integrate_interval(
        |t| Ok(unitary_map_image(f, params, t)?.conj() * unitary_map_image(g, params, t)?),
        t0,
        t1,
        &breaks,
        &tcfg,
    )?;
    let direct = inner_product(f, g, Measure::Standard, params, cfg)?;
    Ok((mapped, direct))
}

fn angle_range(f: &StateSpec, g: &StateSpec, params: &ModelParams) -> Result<(f64, f64)> {
    let mut lo = -FRAC_PI_2;
    let mut hi = FRAC_PI_2;
    for grid in [f, g].into_iter().filter_map(StateSpec::as_grid) {
        let (a, b) = grid.range();
        lo = lo.max(params.angle(a));
        hi = hi.min(params.angle(b));
    }
    if !(hi > lo) {
        return Err(Error::InvalidParameter(
            "sampled states have disjoint momentum ranges".into(),
        ));
    }
    Ok((lo, hi))
}
