//! Integer predicates for the non-vanishing, injectivity and properness
//! criteria, the Fano vanishing case analysis and the normal-bundle duality
//! table.
//!
//! Nothing here touches ring computations; callers compare these predictions
//! with measured dimensions.

use serde::{Deserialize, Serialize};

pub fn sigma(n: i64, d: i64, e: i64) -> i64 {
    2 * (d - n - 1) + e
}

pub fn delta_min(d: i64, e: i64) -> i64 {
    d.min(e)
}

/// Closed interval `[d-n-1, d-n-1+e]`.
pub fn duality_window(n: i64, d: i64, e: i64) -> (i64, i64) {
    (d - n - 1, d - n - 1 + e)
}

pub fn in_window(n: i64, d: i64, e: i64, l: i64) -> bool {
    let (lo, hi) = duality_window(n, d, e);
    lo <= l && l <= hi
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    /// The inequality, written out.
    pub text: String,
    /// Left and right sides as evaluated, when it is a comparison.
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    pub source: String,
}

impl Condition {
    fn le(text: impl Into<String>, lhs: i64, rhs: i64, source: &str) -> Self {
        Condition { text: text.into(), lhs, rhs, holds: lhs <= rhs, source: source.into() }
    }

    fn ge(text: impl Into<String>, lhs: i64, rhs: i64, source: &str) -> Self {
        Condition { text: text.into(), lhs, rhs, holds: lhs >= rhs, source: source.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub inputs: Vec<(String, i64)>,
    pub conditions: Vec<Condition>,
    pub verdict: bool,
    pub warnings: Vec<String>,
}

impl CriterionReport {
    fn new(criterion: &str, inputs: &[(&str, i64)], conditions: Vec<Condition>, warnings: Vec<String>) -> Self {
        let verdict = conditions.iter().all(|c| c.holds);
        CriterionReport {
            criterion: criterion.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            conditions,
            verdict,
            warnings,
        }
    }
}

const HODGEFIL: &str = "non-vanishing corollary";
const CONSMAC: &str = "injectivity corollary";
const LOCI: &str = "Hodge loci theorem";

fn window_warning(n: i64, d: i64, e: i64, l: i64) -> Vec<String> {
    if in_window(n, d, e, l) {
        Vec::new()
    } else {
        let (lo, hi) = duality_window(n, d, e);
        vec![format!("l = {l} lies outside the duality window [{lo}, {hi}]")]
    }
}

/// Report form of the non-vanishing prediction for `B_p(l)`.
pub fn hodgefil_report(n: i64, d: i64, e: i64, p: i64, l: i64) -> CriterionReport {
    let dm = delta_min(d, e);
    let s = sigma(n, d, e);
    let conditions = vec![
        Condition::ge("delta_min*p + l >= 0", dm * p + l, 0, HODGEFIL),
        Condition::le("l <= Sigma + delta_min*(n-1-p)", l, s + dm * (n - 1 - p), HODGEFIL),
    ];
    CriterionReport::new(
        "hodgefil",
        &[("n", n), ("d", d), ("e", e), ("p", p), ("l", l)],
        conditions,
        window_warning(n, d, e, l),
    )
}

/// Predicts `B_p(l) != 0`. Meaningful inside the duality window.
pub fn hodgefil_predict(n: i64, d: i64, e: i64, p: i64, l: i64) -> bool {
    hodgefil_report(n, d, e, p, l).verdict
}

/// The five hypotheses under which multiplication
/// `B_p(l) -> Hom(B_p'(l'), B_{p+p'}(l+l'))` is injective.
pub fn consmac_conditions(n: i64, d: i64, e: i64, p: i64, p2: i64, l: i64, l2: i64) -> CriterionReport {
    let dm = delta_min(d, e);
    let s = sigma(n, d, e);
    let (lo, hi) = duality_window(n, d, e);
    let conditions = vec![
        Condition::ge(
            "delta_min*(n-1-p-p') + Sigma - (l+l') >= 0",
            dm * (n - 1 - p - p2) + s - (l + l2),
            0,
            CONSMAC,
        ),
        Condition::ge("delta_min*p' + l' >= 0", dm * p2 + l2, 0, CONSMAC),
        Condition::le("p + p' <= n-1", p + p2, n - 1, CONSMAC),
        Condition::le("l + l' <= Sigma", l + l2, s, CONSMAC),
        Condition::le("d-n-1 <= l", lo, l, CONSMAC),
        Condition::le("l <= d-n-1+e", l, hi, CONSMAC),
    ];
    CriterionReport::new(
        "consmac",
        &[("n", n), ("d", d), ("e", e), ("p", p), ("p'", p2), ("l", l), ("l'", l2)],
        conditions,
        Vec::new(),
    )
}

/// Sufficient condition for the Hodge loci `S^p_lambda` to be proper.
pub fn hodge_loci_proper(n: i64, d: i64, e: i64, p: i64) -> CriterionReport {
    let dm = delta_min(d, e);
    let s = sigma(n, d, e);
    let t = d + e - n - 1;
    let conditions = vec![
        Condition::ge("delta_min*(n-p) + d+e-n-1 >= 0", dm * (n - p) + t, 0, LOCI),
        Condition::le("d+e-n-1 <= Sigma + delta_min*(p-1)", t, s + dm * (p - 1), LOCI),
    ];
    CriterionReport::new("hodge_loci_proper", &[("n", n), ("d", d), ("e", e), ("p", p)], conditions, Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistExponents {
    pub m: i64,
    pub k: i64,
    pub s: [i64; 4],
    /// The four bundle identifications on a threefold with `K_X(mY) = O_X`.
    pub identifications: Vec<String>,
}

pub fn twist_exponents(m: i64, k: i64) -> TwistExponents {
    let s = [m, m - 1, m - k, m - k - 1];
    let identifications = vec![
        format!("T_X = Omega^2_X({}Y)", s[0]),
        format!("T_X(-log Y) = Omega^2_X(log Y)({}Y)", s[1]),
        format!("T_X({}Y) = Omega^2_X({}Y)", -k, s[2]),
        format!("T_X(-log Y)({}Y) = Omega^2_X(log Y)({}Y)", -k, s[3]),
    ];
    TwistExponents { m, k, s, identifications }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VanishingCase {
    /// `s_j >= 1`: `H^q(S_j) = 0` for all `q > 1`.
    Ample,
    /// `s_j = 0` with `j` in `{1, 2, 3}`: `H^q(S_j) = 0` for `2 <= q <= n-1`.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingClaim {
    pub j: usize,
    pub s_j: i64,
    pub case: Option<VanishingCase>,
    /// Inclusive range of cohomological degrees claimed to vanish; `None` if
    /// no claim or the range is empty.
    pub q_range: Option<(i64, i64)>,
    pub h2_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub n: i64,
    pub m: i64,
    pub k: i64,
    pub claims: Vec<VanishingClaim>,
    pub assumption: String,
}

/// Guaranteed vanishings of `H^q(X, S_j)` for a Fano pair with
/// `K_X + mY = 0`. Requires `n >= 2`.
pub fn vanishing_report(n: i64, m: i64, k: i64) -> VanishingReport {
    assert!(n >= 2, "vanishing_report needs n >= 2");
    let te = twist_exponents(m, k);
    let claims = te
        .s
        .iter()
        .enumerate()
        .map(|(j, &s_j)| {
            let case = if s_j >= 1 {
                Some(VanishingCase::Ample)
            } else if s_j == 0 && j >= 1 {
                Some(VanishingCase::Boundary)
            } else {
                None
            };
            let q_range = match case {
                Some(VanishingCase::Ample) => Some((2, n)),
                Some(VanishingCase::Boundary) if n - 1 >= 2 => Some((2, n - 1)),
                _ => None,
            };
            let h2_vanishes = q_range.is_some_and(|(a, b)| a <= 2 && 2 <= b);
            VanishingClaim { j, s_j, case, q_range, h2_vanishes }
        })
        .collect();
    VanishingReport {
        n,
        m,
        k,
        claims,
        assumption: "X Fano; O_X(s_j Y) ample whenever s_j >= 1 (assumed, not checked)".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityTableRow {
    pub m: i64,
    pub k: i64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub m: i64,
    pub k: i64,
    pub symmetric: bool,
    /// Matching row of the Fano table, if any.
    pub flag: Option<String>,
    pub fano_table: Vec<DualityTableRow>,
}

pub fn fano_duality_table() -> Vec<DualityTableRow> {
    vec![
        DualityTableRow { m: 0, k: 0, note: "classical Calabi-Yau case".into() },
        DualityTableRow { m: 2, k: 1, note: "half-log Calabi-Yau: H^0(N(-Y)) = H^1(N(-Y))^*".into() },
        DualityTableRow { m: 4, k: 2, note: "X = P^3, Y = P^2".into() },
    ]
}

/// Twists `k - m` and `-k` coincide iff `m = 2k`.
pub fn duality_symmetric(m: i64, k: i64) -> DualityReport {
    let fano_table = fano_duality_table();
    let flag = fano_table.iter().find(|r| r.m == m && r.k == k).map(|r| r.note.clone());
    DualityReport { m, k, symmetric: m == 2 * k, flag, fano_table }
}
