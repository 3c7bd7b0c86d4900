//! Factoring SU(N) matrices into chains of two-channel SU(2) elements.
//!
//! A [`FactorChain`] lists factors left to right as they appear in the
//! matrix product, so the rightmost factor acts on the light first.
//! Three factorizations are provided:
//!
//! * [`decompose_sun`]: adjacent-pair Givens nulling for any N, with
//!   exactly N(N-1)/2 factors;
//! * [`decompose_su3_pattern`]: `R23 . R12 . R23` with the middle factor a
//!   beam splitter whose off-diagonals are real;
//! * [`decompose_su4_pattern`]: `R23 . R34 . R23 . R12 . R23 . R34 . R23`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tol;
use crate::unitary::{
    beam_splitter, embed, su2_from_euler, BeamSplitterParams, ChannelPair, SU2Params,
    UnitaryMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// `(alpha, beta, gamma)` of `R_z(alpha) R_y(beta) R_z(gamma)`.
    Euler,
    /// `(phi_t, theta, phi_r)` of a generalized beam splitter.
    #[serde(rename = "beamsplitter")]
    BeamSplitter,
    /// `(s, 0, 0)`: real rotation by `s`.
    RealRotation,
}

/// One embedded SU(2) element of a chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2Factor {
    pub pair: ChannelPair,
    pub kind: FactorKind,
    pub params: [f64; 3],
}

impl SU2Factor {
    pub fn euler(pair: ChannelPair, p: SU2Params) -> Self {
        Self {
            pair,
            kind: FactorKind::Euler,
            params: [p.alpha, p.beta, p.gamma],
        }
    }

    pub fn beam_splitter(pair: ChannelPair, p: BeamSplitterParams) -> Self {
        Self {
            pair,
            kind: FactorKind::BeamSplitter,
            params: [p.phi_t, p.theta, p.phi_r],
        }
    }

    pub fn real_rotation(pair: ChannelPair, s: f64) -> Self {
        Self {
            pair,
            kind: FactorKind::RealRotation,
            params: [s, 0.0, 0.0],
        }
    }

    /// The 2x2 block.
    pub fn block(&self) -> Result<UnitaryMatrix> {
        let [a, b, c] = self.params;
        match self.kind {
            FactorKind::Euler => su2_from_euler(SU2Params::new(a, b, c)),
            FactorKind::BeamSplitter => beam_splitter(BeamSplitterParams::new(a, b, c)),
            FactorKind::RealRotation => beam_splitter(BeamSplitterParams::rotation(a)),
        }
    }

    /// The factor embedded in its N-channel system.
    pub fn materialize(&self) -> Result<UnitaryMatrix> {
        embed(&self.block()?, self.pair)
    }

    pub fn is_identity(&self) -> bool {
        self.block()
            .map(|b| b.max_abs_diff(&UnitaryMatrix::identity(2)) <= tol::CONSTRUCTION)
            .unwrap_or(false)
    }
}

/// Ordered product of embedded SU(2) factors on `n` channels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainRecord", into = "ChainRecord")]
pub struct FactorChain {
    n: usize,
    factors: Vec<SU2Factor>,
}

impl FactorChain {
    pub fn new(n: usize, factors: Vec<SU2Factor>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidChain("a chain needs at least one channel".into()));
        }
        for f in &factors {
            if f.pair.n() != n {
                return Err(Error::InvalidChain(format!(
                    "factor on {} belongs to a {}-channel system, chain has {n}",
                    f.pair,
                    f.pair.n()
                )));
            }
            if f.params.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidChain(format!("factor on {} has non-finite parameters", f.pair)));
            }
        }
        Ok(Self { n, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[SU2Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Channel pairs in chain order, one-based.
    pub fn pair_sequence(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|f| f.pair.channels()).collect()
    }

    /// The chain without identity factors.
    pub fn pruned(&self) -> Self {
        Self {
            n: self.n,
            factors: self.factors.iter().filter(|f| !f.is_identity()).copied().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chains serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: ChainRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        Self::try_from(record)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorRecord {
    pair: [usize; 2],
    kind: FactorKind,
    params: [f64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainRecord {
    n: usize,
    factors: Vec<FactorRecord>,
}

impl TryFrom<ChainRecord> for FactorChain {
    type Error = Error;

    fn try_from(r: ChainRecord) -> Result<Self> {
        let factors = r
            .factors
            .into_iter()
            .map(|f| {
                ChannelPair::new(f.pair[0], f.pair[1], r.n)
                    .map_err(|e| Error::InvalidChain(e.to_string()))
                    .map(|pair| SU2Factor {
                        pair,
                        kind: f.kind,
                        params: f.params,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        FactorChain::new(r.n, factors)
    }
}

impl From<FactorChain> for ChainRecord {
    fn from(c: FactorChain) -> Self {
        ChainRecord {
            n: c.n,
            factors: c
                .factors
                .into_iter()
                .map(|f| {
                    let (i, j) = f.pair.channels();
                    FactorRecord {
                        pair: [i, j],
                        kind: f.kind,
                        params: f.params,
                    }
                })
                .collect(),
        }
    }
}

/// Ordered product of the chain's embedded factors.
pub fn recompose(c: &FactorChain) -> Result<UnitaryMatrix> {
    let mut acc = UnitaryMatrix::identity(c.n());
    for f in c.factors() {
        if f.pair.n() != c.n() {
            return Err(Error::InvalidChain(format!("factor on {} does not fit {} channels", f.pair, c.n())));
        }
        acc = acc.compose(&f.materialize()?);
    }
    Ok(acc)
}

fn check_input(u: &UnitaryMatrix, n: Option<usize>) -> Result<()> {
    if let Some(n) = n {
        if u.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.dim(),
            });
        }
    }
    if u.dim() < 2 {
        return Err(Error::InvalidArgument("decomposition needs at least two channels".into()));
    }
    u.check_special()
}

/// The SU(2) matrix with first column `(a, c)` (of unit norm).
fn su2_with_first_column(a: Complex64, c: Complex64) -> Matrix {
    Matrix::from_rows(vec![vec![a, -c.conj()], vec![c, a.conj()]]).expect("2x2")
}

/// Elimination order for [`decompose_sun`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NullingOrder {
    /// Left multiplication, column by column, bottom entry first.
    #[default]
    Columns,
    /// Right multiplication, row by row, rightmost entry first.
    Rows,
}

/// Factors `u` into N(N-1)/2 adjacent-pair SU(2) elements.
///
/// Each step left-multiplies the working matrix by an SU(2) on rows
/// `(r-1, r)` that sends the pair of entries `(x, y)` in the current column
/// to `(|x|^2+|y|^2)^{1/2}, 0)`. The last step of every column therefore
/// leaves a real positive pivot, which equals one by unitarity, so the
/// working matrix ends as the identity up to rounding and no separate
/// diagonal phases remain.
pub fn decompose_sun(u: &UnitaryMatrix, order: NullingOrder) -> Result<FactorChain> {
    check_input(u, None)?;
    match order {
        NullingOrder::Columns => nulling_chain(u),
        NullingOrder::Rows => {
            // U^T = F1 ... Fm  =>  U = Fm^T ... F1^T
            let chain = nulling_chain(&u.transpose())?;
            let factors = chain
                .factors
                .iter()
                .rev()
                .map(|f| {
                    let block = f.block()?.transpose();
                    Ok(SU2Factor::euler(f.pair, SU2Params::from_su2(&block)?))
                })
                .collect::<Result<Vec<_>>>()?;
            FactorChain::new(u.dim(), factors)
        }
    }
}

fn nulling_chain(u: &UnitaryMatrix) -> Result<FactorChain> {
    let n = u.dim();
    let mut work = u.as_matrix().clone();
    // each entry is (pair, G) with G applied on the left of the working matrix
    let mut applied: Vec<(ChannelPair, Matrix)> = Vec::with_capacity(n * (n - 1) / 2);
    for col in 0..n - 1 {
        for r in (col + 1..n).rev() {
            let x = work[(r - 1, col)];
            let y = work[(r, col)];
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let g = if rho <= tol::NULL_ENTRY {
                Matrix::identity(2)
            } else {
                // rows: (conj x, conj y) / rho and (-y, x) / rho
                Matrix::from_rows(vec![
                    vec![x.conj() / rho, y.conj() / rho],
                    vec![-y / rho, x / rho],
                ])
                .expect("2x2")
            };
            rotate_rows(&mut work, r - 1, r, &g);
            work[(r, col)] = Complex64::new(0.0, 0.0);
            applied.push((ChannelPair::new(r, r + 1, n)?, g));
        }
    }
    // U = G1^dagger G2^dagger ... Gm^dagger
    let factors = applied
        .into_iter()
        .map(|(pair, g)| {
            let block = UnitaryMatrix::from_trusted(g.adjoint());
            Ok(SU2Factor::euler(pair, SU2Params::from_su2(&block)?))
        })
        .collect::<Result<Vec<_>>>()?;
    FactorChain::new(n, factors)
}

fn rotate_rows(m: &mut Matrix, i: usize, j: usize, g: &Matrix) {
    for c in 0..m.dim() {
        let a = m[(i, c)];
        let b = m[(j, c)];
        m[(i, c)] = g[(0, 0)] * a + g[(0, 1)] * b;
        m[(j, c)] = g[(1, 0)] * a + g[(1, 1)] * b;
    }
}

/// Restriction of `m` to the channels `i..i+k` (zero-based), assumed to be
/// block diagonal with ones elsewhere.
fn sub_block(m: &UnitaryMatrix, start: usize, k: usize) -> Result<UnitaryMatrix> {
    let block = Matrix::from_fn(k, |r, c| m.entry(start + r, start + c));
    UnitaryMatrix::new_special(block).map_err(|_| Error::DecompositionFailure {
        residual: m.unitarity_defect(),
    })
}

/// `U = R23(A) . R12(M) . R23(B)` with `M = [[e^{ia} cos t, -sin t], [sin t, e^{-ia} cos t]]`.
///
/// `A` and `B` are returned as Euler factors, `M` as a beam splitter
/// `(a, t, 0)` with `t` in [0, pi/2]. When `|U11| = 1` the first factor is
/// the identity; when `U11 = 0` the middle phase is zero.
pub fn decompose_su3_pattern(u: &UnitaryMatrix) -> Result<FactorChain> {
    check_input(u, Some(3))?;
    let p23 = ChannelPair::new(2, 3, 3)?;
    let p12 = ChannelPair::new(1, 2, 3)?;

    // U e1 = (e^{ia} cos t, A11 sin t, A21 sin t)
    let u11 = u.entry(0, 0);
    let (u21, u31) = (u.entry(1, 0), u.entry(2, 0));
    let sin_t = (u21.norm_sqr() + u31.norm_sqr()).sqrt();
    let t = sin_t.atan2(u11.norm());
    let alpha = crate::angle::arg_or_zero(u11);
    let middle = BeamSplitterParams::new(alpha, t, 0.0);
    let first = if sin_t <= tol::NULL_ENTRY {
        UnitaryMatrix::identity(2)
    } else {
        UnitaryMatrix::from_trusted(su2_with_first_column(u21 / sin_t, u31 / sin_t))
    };
    let first_params = SU2Params::from_su2(&first)?;
    let left = embed(&su2_from_euler(first_params)?, p23)?
        .compose(&embed(&beam_splitter(middle)?, p12)?);
    let rest = left.adjoint().compose(u);
    let last = sub_block(&rest, 1, 2)?;
    FactorChain::new(
        3,
        vec![
            SU2Factor::euler(p23, first_params),
            SU2Factor::beam_splitter(p12, middle),
            SU2Factor::euler(p23, SU2Params::from_su2(&last)?),
        ],
    )
}

/// Three beam splitters `A (2,3)`, `B (3,4)`, `C (2,3)` with
/// `A . B . C e2 = v` on channels 2..4, for a unit vector `v`.
///
/// `A` is the identity. `B` sends `e3` to `(|v3|, v4 e^{-i arg v3}) / rho`
/// and `C` sends `e2` to `(v2, rho e^{i arg v3})`, where
/// `rho = (|v3|^2 + |v4|^2)^{1/2}`. With `v4 = 0`, `B` is the identity.
pub fn solve_column_pattern(v: [Complex64; 3]) -> [BeamSplitterParams; 3] {
    let [x, y, z] = v;
    let rho = (y.norm_sqr() + z.norm_sqr()).sqrt();
    let phase = crate::angle::arg_or_zero(y);
    let b = if rho <= tol::NULL_ENTRY {
        BeamSplitterParams::IDENTITY
    } else {
        BeamSplitterParams::from_first_column(
            Complex64::new(y.norm() / rho, 0.0),
            z * crate::angle::cis(-phase) / rho,
        )
    };
    let c = BeamSplitterParams::from_first_column(x, crate::angle::cis(phase) * rho);
    [BeamSplitterParams::IDENTITY, b, c]
}

/// `U = R23 . R34 . R23 . R12 . R23 . R34 . R23`.
///
/// Reading `U = L . M . T` with `L` and `T` acting on channels 2..4 and `M`
/// on (1,2): `M`'s first column is `(U11, rho e^{i arg U21})`, where `rho` is
/// the norm of the rest of `U`'s first column, so that `L e2` has a real
/// non-negative first entry; `L` comes from [`solve_column_pattern`]. `T`
/// is split the same way around its (3,4) factor, using its last column.
pub fn decompose_su4_pattern(u: &UnitaryMatrix) -> Result<FactorChain> {
    check_input(u, Some(4))?;
    let pair = |i, j| ChannelPair::new(i, j, 4);
    let u11 = u.entry(0, 0);
    let tail = [u.entry(1, 0), u.entry(2, 0), u.entry(3, 0)];
    let rho = tail.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let (m_block, l_params) = if rho <= tol::NULL_ENTRY {
        (
            su2_with_first_column(u11, Complex64::new(0.0, 0.0)),
            [BeamSplitterParams::IDENTITY; 3],
        )
    } else {
        let phase = crate::angle::arg_or_zero(tail[0]);
        let m2 = crate::angle::cis(phase) * rho;
        let scale = crate::angle::cis(-phase) / rho;
        let v = tail.map(|z| z * scale);
        (su2_with_first_column(u11, m2), solve_column_pattern(v))
    };
    let m_params = SU2Params::from_su2(&UnitaryMatrix::from_trusted(m_block))?;
    let l_factors = [
        SU2Factor::euler(pair(2, 3)?, SU2Params::from_su2(&beam_splitter(l_params[0])?)?),
        SU2Factor::euler(pair(3, 4)?, SU2Params::from_su2(&beam_splitter(l_params[1])?)?),
        SU2Factor::euler(pair(2, 3)?, SU2Params::from_su2(&beam_splitter(l_params[2])?)?),
    ];
    let m_factor = SU2Factor::euler(pair(1, 2)?, m_params);

    let mut left = UnitaryMatrix::identity(4);
    for f in l_factors.iter().chain(std::iter::once(&m_factor)) {
        left = left.compose(&f.materialize()?);
    }
    let rest = left.adjoint().compose(u);
    let s = sub_block(&rest, 1, 3)?;
    let t_factors = split_su3_around_lower_pair(&s)?;
    let factors = l_factors
        .into_iter()
        .chain(std::iter::once(m_factor))
        .chain([
            SU2Factor::euler(pair(2, 3)?, t_factors[0]),
            SU2Factor::euler(pair(3, 4)?, t_factors[1]),
            SU2Factor::euler(pair(2, 3)?, t_factors[2]),
        ])
        .collect();
    FactorChain::new(4, factors)
}

/// `S = P(1,2) . Q(2,3) . P'(1,2)` for a 3x3 special unitary, from its last
/// column `S e3 = (P12 q1, P22 q1, q2)` where `(q1, q2)` is `Q`'s second
/// column and `q1 = rho e^{i arg S23}`.
fn split_su3_around_lower_pair(s: &UnitaryMatrix) -> Result<[SU2Params; 3]> {
    let (s13, s23, s33) = (s.entry(0, 2), s.entry(1, 2), s.entry(2, 2));
    let rho = (s13.norm_sqr() + s23.norm_sqr()).sqrt();
    let (p_block, q1) = if rho <= tol::NULL_ENTRY {
        (Matrix::identity(2), Complex64::new(0.0, 0.0))
    } else {
        let phase = crate::angle::arg_or_zero(s23);
        let q1 = crate::angle::cis(phase) * rho;
        // second column of P is (S13, S23) / q1 = (-conj b, conj a)
        let col = (s13 / q1, s23 / q1);
        (su2_with_first_column(col.1.conj(), -col.0.conj()), q1)
    };
    // second column of Q is (q1, S33) = (-conj d, conj c)
    let q_block = su2_with_first_column(s33.conj(), -q1.conj());
    let p = UnitaryMatrix::from_trusted(p_block);
    let q = UnitaryMatrix::from_trusted(q_block);
    let p3 = embed(&p, ChannelPair::new(1, 2, 3)?)?;
    let q3 = embed(&q, ChannelPair::new(2, 3, 3)?)?;
    let rest = p3.compose(&q3).adjoint().compose(s);
    let last = sub_block(&rest, 0, 2)?;
    Ok([
        SU2Params::from_su2(&p)?,
        SU2Params::from_su2(&q)?,
        SU2Params::from_su2(&last)?,
    ])
}

/// Tally of a chain's factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ElementCount {
    /// Keyed by one-based channel pair.
    pub by_pair: BTreeMap<(usize, usize), usize>,
    pub by_kind: BTreeMap<FactorKind, usize>,
    pub total: usize,
}

impl ElementCount {
    pub fn for_pair(&self, i: usize, j: usize) -> usize {
        self.by_pair.get(&(i, j)).copied().unwrap_or(0)
    }
}

pub fn element_count(c: &FactorChain) -> ElementCount {
    let mut out = ElementCount::default();
    for f in c.factors() {
        *out.by_pair.entry(f.pair.channels()).or_default() += 1;
        *out.by_kind.entry(f.kind).or_default() += 1;
        out.total += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::reference_rotation;
    use crate::sampling::{haar_special_unitary, random_su2_params};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(1994)
    }

    fn assert_round_trip(u: &UnitaryMatrix, chain: &FactorChain, bound: f64) {
        let back = recompose(chain).unwrap();
        let err = back.max_abs_diff(u);
        assert!(err <= bound, "round-trip error {err:e}");
    }

    #[test]
    fn empty_chain_is_identity() {
        let c = FactorChain::new(3, vec![]).unwrap();
        assert_eq!(recompose(&c).unwrap(), UnitaryMatrix::identity(3));
        assert_eq!(element_count(&c).total, 0);
        assert!(element_count(&c).by_pair.is_empty());
    }

    #[test]
    fn single_rotation_chain() {
        let s = 0.45;
        let c = FactorChain::new(3, vec![SU2Factor::real_rotation(ChannelPair::new(1, 2, 3).unwrap(), s)])
            .unwrap();
        let r = reference_rotation(s, 3).unwrap();
        assert!(recompose(&c).unwrap().max_abs_diff(&r) < 1e-15);
    }

    #[test]
    fn chain_rejects_mismatched_pairs() {
        let f = SU2Factor::real_rotation(ChannelPair::new(1, 2, 4).unwrap(), 0.1);
        assert!(matches!(FactorChain::new(3, vec![f]), Err(Error::InvalidChain(_))));
        let bad = r#"{"n": 3, "factors": [{"pair": [3, 4], "kind": "euler", "params": [0, 0, 0]}]}"#;
        assert!(matches!(FactorChain::from_json(bad), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn identity_decomposes_to_identity_factors() {
        for n in 2..=5 {
            let chain = decompose_sun(&UnitaryMatrix::identity(n), NullingOrder::Columns).unwrap();
            assert_eq!(chain.len(), n * (n - 1) / 2);
            assert!(chain.pruned().is_empty());
        }
        let c3 = decompose_su3_pattern(&UnitaryMatrix::identity(3)).unwrap();
        assert!(c3.factors().iter().all(|f| f.params == [0.0; 3]));
        let c4 = decompose_su4_pattern(&UnitaryMatrix::identity(4)).unwrap();
        assert!(c4.factors().iter().all(|f| f.is_identity()));
    }

    #[test]
    fn embedded_beam_splitter_is_recovered() {
        let p = BeamSplitterParams::new(0.7, 1.1, -0.4);
        let u = embed(&beam_splitter(p).unwrap(), ChannelPair::new(2, 3, 3).unwrap()).unwrap();
        let chain = decompose_sun(&u, NullingOrder::Columns).unwrap().pruned();
        assert_eq!(chain.len(), 1);
        let f = chain.factors()[0];
        assert_eq!(f.pair.channels(), (2, 3));
        let recovered: BeamSplitterParams = SU2Params::new(f.params[0], f.params[1], f.params[2]).into();
        assert!(beam_splitter(recovered).unwrap().max_abs_diff(&beam_splitter(p).unwrap()) < 1e-14);
        assert!((recovered.theta - p.theta).abs() < 1e-14);
    }

    #[test]
    fn sun_round_trip_both_orders() {
        let mut r = rng();
        for n in 2..=6 {
            for _ in 0..20 {
                let u = haar_special_unitary(n, &mut r);
                for order in [NullingOrder::Columns, NullingOrder::Rows] {
                    let chain = decompose_sun(&u, order).unwrap();
                    assert_eq!(chain.len(), n * (n - 1) / 2);
                    assert!(chain.factors().iter().all(|f| f.pair.is_adjacent()));
                    assert_round_trip(&u, &chain, 1e-10);
                }
            }
        }
    }

    #[test]
    fn sun_is_deterministic() {
        let u = haar_special_unitary(5, &mut rng());
        let a = decompose_sun(&u, NullingOrder::Columns).unwrap();
        let b = decompose_sun(&u, NullingOrder::Columns).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_non_special_input() {
        let mut m = Matrix::identity(3);
        m[(0, 0)] = Complex64::new(0.0, 1.0);
        let u = UnitaryMatrix::new(m).unwrap();
        assert!(matches!(decompose_sun(&u, NullingOrder::Columns), Err(Error::NotSpecial { .. })));
        assert!(matches!(decompose_su3_pattern(&u), Err(Error::NotSpecial { .. })));
    }

    #[test]
    fn su3_pattern_on_its_own_factors() {
        let block = su2_from_euler(SU2Params::new(0.3, 0.8, -1.2)).unwrap();
        let u = embed(&block, ChannelPair::new(2, 3, 3).unwrap()).unwrap();
        let chain = decompose_su3_pattern(&u).unwrap();
        assert!(chain.factors()[0].is_identity());
        assert_eq!(chain.factors()[1].params[1], 0.0);
        assert_round_trip(&u, &chain, 1e-14);

        let s = 0.9;
        let rot = reference_rotation(s, 3).unwrap();
        let chain = decompose_su3_pattern(&rot).unwrap();
        let mid = chain.factors()[1];
        assert!((mid.params[1] - s).abs() < 1e-15);
        assert_eq!(mid.params[0], 0.0);
        assert!(chain.factors()[0].is_identity() && chain.factors()[2].is_identity());
    }

    #[test]
    fn su3_pattern_round_trip_and_ranges() {
        let mut r = rng();
        for _ in 0..200 {
            let u = haar_special_unitary(3, &mut r);
            let chain = decompose_su3_pattern(&u).unwrap();
            assert_eq!(chain.pair_sequence(), vec![(2, 3), (1, 2), (2, 3)]);
            assert_round_trip(&u, &chain, 1e-10);
            let mid = chain.factors()[1];
            assert_eq!(mid.kind, FactorKind::BeamSplitter);
            assert!(mid.params[1] >= 0.0 && mid.params[1] <= FRAC_PI_2);
            assert!(mid.params[0] > -PI && mid.params[0] <= PI);
            assert_eq!(mid.params[2], 0.0);
            for f in [chain.factors()[0], chain.factors()[2]] {
                assert!(f.params[0] > -PI && f.params[0] <= PI);
                assert!(f.params[1] >= 0.0 && f.params[1] <= PI);
                assert!(f.params[2] > -PI && f.params[2] <= PI);
            }
        }
    }

    #[test]
    fn su3_pattern_with_vanishing_corner() {
        // U11 = 0: full mixing in the middle factor
        let u = reference_rotation(FRAC_PI_2, 3).unwrap();
        let chain = decompose_su3_pattern(&u).unwrap();
        assert_eq!(chain.factors()[1].params[0], 0.0);
        assert_round_trip(&u, &chain, 1e-14);
    }

    #[test]
    fn su4_pattern_round_trip() {
        let mut r = rng();
        for _ in 0..200 {
            let u = haar_special_unitary(4, &mut r);
            let chain = decompose_su4_pattern(&u).unwrap();
            assert_eq!(
                chain.pair_sequence(),
                vec![(2, 3), (3, 4), (2, 3), (1, 2), (2, 3), (3, 4), (2, 3)]
            );
            assert_round_trip(&u, &chain, 1e-10);
        }
    }

    #[test]
    fn su4_pattern_on_block_diagonal_input() {
        let mut r = rng();
        let a = su2_from_euler(random_su2_params(&mut r)).unwrap();
        let b = su2_from_euler(random_su2_params(&mut r)).unwrap();
        let u = embed(&a, ChannelPair::new(1, 2, 4).unwrap())
            .unwrap()
            .compose(&embed(&b, ChannelPair::new(3, 4, 4).unwrap()).unwrap());
        let chain = decompose_su4_pattern(&u).unwrap();
        assert_round_trip(&u, &chain, 1e-14);
        for f in chain.pruned().factors() {
            assert!(matches!(f.pair.channels(), (1, 2) | (3, 4)), "unexpected factor on {}", f.pair);
        }
        assert_eq!(chain.pruned().len(), 2);
    }

    #[test]
    fn column_pattern_hits_its_target() {
        let mut r = rng();
        for _ in 0..100 {
            let v = crate::sampling::random_state(3, &mut r);
            let vv = [v.amplitudes()[0], v.amplitudes()[1], v.amplitudes()[2]];
            let [a, b, c] = solve_column_pattern(vv);
            let pair = |i, j| ChannelPair::new(i, j, 4).unwrap();
            let w = embed(&beam_splitter(a).unwrap(), pair(2, 3))
                .unwrap()
                .compose(&embed(&beam_splitter(b).unwrap(), pair(3, 4)).unwrap())
                .compose(&embed(&beam_splitter(c).unwrap(), pair(2, 3)).unwrap());
            for k in 0..3 {
                assert!((w.entry(k + 1, 1) - vv[k]).norm() < 1e-14);
            }
            assert!((w.entry(0, 0) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn element_counts_for_the_patterns() {
        let mut r = rng();
        let c3 = decompose_su3_pattern(&haar_special_unitary(3, &mut r)).unwrap();
        let e3 = element_count(&c3);
        assert_eq!(e3.for_pair(2, 3), 2);
        assert_eq!(e3.for_pair(1, 2), 1);
        assert_eq!(e3.total, 3);

        let c4 = decompose_su4_pattern(&haar_special_unitary(4, &mut r)).unwrap();
        let e4 = element_count(&c4);
        assert_eq!(e4.for_pair(2, 3), 4);
        assert_eq!(e4.for_pair(3, 4), 2);
        assert_eq!(e4.for_pair(1, 2), 1);
        assert_eq!(e4.total, 7);
    }

    #[test]
    fn chain_json_round_trip() {
        let mut r = rng();
        let chain = decompose_su4_pattern(&haar_special_unitary(4, &mut r)).unwrap();
        let text = chain.to_json();
        assert!(text.contains("\"pair\""));
        assert!(text.contains("\"kind\": \"euler\""));
        assert_eq!(FactorChain::from_json(&text).unwrap(), chain);
    }
}
