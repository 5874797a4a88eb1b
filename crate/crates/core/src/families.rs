//! Parametric constructions with explicit eigenvalues.
//!
//! Every generator validates its parameter range with exact sign tests
//! against the session oracle. Numeric choices of alpha are the caller's.

use crate::iet::{build_iet, compose, Iet, Permutation};
use crate::numeric::{rational, AlphaOracle, QAlpha, Sign};
use crate::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

/// Coordinates a family instance is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    /// The construction's own domain (`[0, n)` for `thm15_family`).
    Native,
    /// Rescaled to `[0, 1)`.
    Unit,
}

/// A family member together with the notes a report should carry.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub name: String,
    pub parameters: Vec<(String, String)>,
    pub chart: Chart,
    pub iet: Iet,
    pub footnotes: Vec<String>,
}

fn require_between(oracle: &AlphaOracle, lo: &QAlpha, hi: &QAlpha, what: &str) -> Result<()> {
    let a = QAlpha::alpha();
    let above = oracle.sign(&(&a - lo))? == Sign::Positive;
    let below = oracle.sign(&(hi - &a))? == Sign::Positive;
    if above && below {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!(
            "{what} requires {lo} < alpha < {hi}, got alpha = {oracle}"
        )))
    }
}

fn qas(v: impl IntoIterator<Item = QAlpha>) -> Vec<QAlpha> {
    v.into_iter().collect()
}

/// The m-interval exchange of `[0, 1)` with
/// `π = (m-1, m-2, ..., 2, m, 1)` and
/// `λ = (1/(m-1), ..., 1/(m-1), 1/(m-1) - alpha, alpha)`, `m > 3`,
/// `0 < alpha < 1/(m-1)`. Its translations are `alpha + (integer)/(m-1)`.
pub fn thm14_family(m: usize, oracle: Arc<AlphaOracle>) -> Result<Iet> {
    if m <= 3 {
        return Err(Error::ParameterOutOfRange(format!("m must exceed 3, got {m}")));
    }
    let k = (m - 1) as i64;
    let unit = QAlpha::frac(1, k, 0, 1);
    require_between(&oracle, &QAlpha::zero(), &unit, "thm14_family")?;
    let mut images: Vec<usize> = (1..=m - 2).map(|i| m - i).collect();
    images.extend([m, 1]);
    let mut lengths = vec![unit.clone(); m - 2];
    lengths.push(&unit - &QAlpha::alpha());
    lengths.push(QAlpha::alpha());
    build_iet(Permutation::new(images)?, lengths, oracle)
}

/// The translation vector as written in closed form on the page,
/// `delta_i = (m-1-2i)/(m-1) + alpha` for `i <= m-2`,
/// `delta_{m-1} = alpha + (m-3)/(m-1)`, `delta_m = alpha - 1`.
/// Its `(m-1)`-th entry disagrees with the map itself; see
/// [`thm14_footnotes`].
pub fn thm14_printed_translations(m: usize) -> Vec<QAlpha> {
    let k = (m - 1) as i64;
    let mut out: Vec<QAlpha> = (1..=m as i64 - 2).map(|i| QAlpha::frac(k - 2 * i, k, 1, 1)).collect();
    out.push(QAlpha::frac(m as i64 - 3, k, 1, 1));
    out.push(QAlpha::frac(-1, 1, 1, 1));
    out
}

/// Notes for every entry where the computed translation differs from
/// [`thm14_printed_translations`].
pub fn thm14_footnotes(t: &Iet) -> Vec<String> {
    let printed = thm14_printed_translations(t.m());
    t.translations()
        .iter()
        .zip(&printed)
        .enumerate()
        .filter(|(_, (computed, printed))| computed != printed)
        .map(|(i, (computed, printed))| {
            format!(
                "delta_{} is computed from (pi, lambda) as {computed}; the closed-form line {printed} is not used",
                i + 1
            )
        })
        .collect()
}

/// The `2n`-interval exchange of `[0, n)` that sends `[i-1, i)` onto
/// `[σ(i)-1, σ(i))`, exchanging the pieces of lengths `alpha` and
/// `1 - alpha` inside it:
/// `T(x) = x + 1 - alpha + σ(i) - i` on `[i-1, i-1+alpha)` and
/// `T(x) = x - alpha + σ(i) - i` on `[i-1+alpha, i)`.
pub fn thm15_family(sigma: &Permutation, oracle: Arc<AlphaOracle>) -> Result<Iet> {
    require_between(&oracle, &QAlpha::zero(), &QAlpha::one(), "thm15_family")?;
    let n = sigma.size();
    let mut images = Vec::with_capacity(2 * n);
    let mut lengths = Vec::with_capacity(2 * n);
    for i in 1..=n {
        images.extend([2 * sigma.image(i), 2 * sigma.image(i) - 1]);
        lengths.extend([QAlpha::alpha(), QAlpha::frac(1, 1, -1, 1)]);
    }
    build_iet(Permutation::new(images)?, lengths, oracle)
}

/// The `n = 2` member of [`thm15_family`] divided by 2 with `alpha/2`
/// renamed `alpha`: `π = (4 3 2 1)`, `λ = (alpha, 1/2-alpha, alpha, 1/2-alpha)`,
/// `0 < alpha < 1/2`.
pub fn n2_rescaled(oracle: Arc<AlphaOracle>) -> Result<Iet> {
    require_between(&oracle, &QAlpha::zero(), &QAlpha::frac(1, 2, 0, 1), "n2_rescaled")?;
    let half_minus = QAlpha::frac(1, 2, -1, 1);
    build_iet(
        Permutation::reversal(4),
        qas([QAlpha::alpha(), half_minus.clone(), QAlpha::alpha(), half_minus]),
        oracle,
    )
}

/// `R_θ(x) = x + θ mod 1` on `[0, 1)`; the identity when `θ = 0`.
pub fn rotation(theta: &QAlpha, oracle: Arc<AlphaOracle>) -> Result<Iet> {
    let theta = oracle.normalize(theta);
    match oracle.sign(&theta)? {
        Sign::Zero => return build_iet(Permutation::identity(1), vec![QAlpha::one()], oracle),
        Sign::Negative => return Err(Error::ParameterOutOfRange(format!("rotation angle {theta} is negative"))),
        Sign::Positive => {}
    }
    build_iet(Permutation::reversal(2), vec![&QAlpha::one() - &theta, theta], oracle)
}

/// `h ∘ R_alpha ∘ h⁻¹` in canonical form, for an exchange `h` of `[0, 1)`.
pub fn conjugated_rotation(h: &Iet) -> Result<Iet> {
    if h.total_length() != &QAlpha::one() {
        return Err(Error::LengthMismatch(format!(
            "conjugating map must act on [0, 1), got [0, {})",
            h.total_length()
        )));
    }
    if !h.oracle().is_certified_irrational() {
        return Err(Error::IrrationalityUnknown {
            value: h.oracle().to_string(),
        });
    }
    let r = rotation(&QAlpha::alpha(), h.oracle_arc().clone())?;
    compose(h, &compose(&r, &h.invert()?)?)
}

/// Named selection of `σ` for [`thm15_family`].
pub fn sigma_by_name(name: &str, n: usize) -> Result<Permutation> {
    match name {
        "cycle" => Ok(Permutation::cyclic_shift(n)),
        "reversal" => Ok(Permutation::reversal(n)),
        "identity" => Ok(Permutation::identity(n)),
        other => {
            let p: Permutation = other.parse()?;
            if p.size() != n {
                return Err(Error::LengthMismatch(format!("sigma has size {} but n = {n}", p.size())));
            }
            Ok(p)
        }
    }
}

impl FamilyInstance {
    pub fn thm14(m: usize, oracle: Arc<AlphaOracle>) -> Result<Self> {
        let iet = thm14_family(m, oracle)?;
        Ok(FamilyInstance {
            name: "thm14".into(),
            parameters: vec![("m".into(), m.to_string())],
            chart: Chart::Native,
            footnotes: thm14_footnotes(&iet),
            iet,
        })
    }

    pub fn thm15(sigma: &Permutation, oracle: Arc<AlphaOracle>, chart: Chart) -> Result<Self> {
        let n = sigma.size();
        let native = thm15_family(sigma, oracle)?;
        let iet = match chart {
            Chart::Native => native,
            Chart::Unit => native.rescale(&rational(1, n as i64))?,
        };
        Ok(FamilyInstance {
            name: "thm15".into(),
            parameters: vec![("n".into(), n.to_string()), ("sigma".into(), sigma.to_string())],
            chart,
            iet,
            footnotes: Vec::new(),
        })
    }

    pub fn n2(oracle: Arc<AlphaOracle>) -> Result<Self> {
        Ok(FamilyInstance {
            name: "n2".into(),
            parameters: Vec::new(),
            chart: Chart::Unit,
            iet: n2_rescaled(oracle)?,
            footnotes: Vec::new(),
        })
    }

    pub fn conjugated_rotation(h: &Iet) -> Result<Self> {
        Ok(FamilyInstance {
            name: "conj-rot".into(),
            parameters: vec![("h".into(), h.permutation().to_string())],
            chart: Chart::Unit,
            iet: conjugated_rotation(h)?,
            footnotes: Vec::new(),
        })
    }
}
