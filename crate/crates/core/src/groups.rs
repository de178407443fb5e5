//! Group-level machinery for `GL_s^p(F)` and `SL_s^p(F)`: membership,
//! words over transvections and diagonal units, constructive decompositions,
//! and the rewriting of ambient transvections into `E_n(A')`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::fields::{Field, Value};
use crate::permatrix::{Block, MatrixError, PeriodicMatrix};
use crate::steinitz::SteinitzNumber;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("determinant at level {level} is {det}, not 1")]
    DetNotOne { level: usize, det: alloc::string::String },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid indices: {0}")]
    InvalidIndices(alloc::string::String),
}

/// One generator of a group word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    /// `t_ij(a)` at the given period.
    Transvection { i: usize, j: usize, a: Value, period: usize },
    /// `diag(1, …, α, …, 1)` with `α ≠ 0` in position `pos`.
    DiagUnit { pos: usize, alpha: Value, period: usize },
}

impl Token {
    pub fn period(&self) -> usize {
        match self {
            Token::Transvection { period, .. } | Token::DiagUnit { period, .. } => *period,
        }
    }

    pub fn matrix(&self, field: &Field) -> Result<PeriodicMatrix, MatrixError> {
        match self {
            Token::Transvection { i, j, a, period } => {
                PeriodicMatrix::transvection(field, *period, *i, *j, a.clone())
            }
            Token::DiagUnit { pos, alpha, period } => {
                PeriodicMatrix::diag_unit(field, *period, *pos, alpha.clone())
            }
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Token::DiagUnit { .. })
    }

    // M <- M · token, with M an `m×m` block and `period | m`.
    fn right_multiply(&self, field: &Field, m: &mut Block) {
        let size = m.size();
        let copies = size / self.period();
        match self {
            Token::Transvection { i, j, a, period } => {
                for b in 0..copies {
                    let (src, dst) = (b * period + i - 1, b * period + j - 1);
                    for r in 0..size {
                        let s = m.at(r, src);
                        if field.is_zero(s) {
                            continue;
                        }
                        let v = field.add(m.at(r, dst), &field.mul(s, a));
                        m.set(r, dst, v);
                    }
                }
            }
            Token::DiagUnit { pos, alpha, period } => {
                for b in 0..copies {
                    let c = b * period + pos - 1;
                    for r in 0..size {
                        let v = field.mul(m.at(r, c), alpha);
                        m.set(r, c, v);
                    }
                }
            }
        }
    }
}

/// An ordered product of generators, all living at periods dividing `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWord {
    field: Field,
    period: usize,
    factors: Vec<Token>,
}

impl GroupWord {
    pub fn new(field: &Field, period: usize, factors: Vec<Token>) -> Result<Self, GroupError> {
        if period == 0 {
            return Err(MatrixError::ZeroPeriod.into());
        }
        for tok in &factors {
            let p = tok.period();
            if p == 0 || !period.is_multiple_of(p) {
                return Err(MatrixError::NotDivisible { period: p, m: period }.into());
            }
            match tok {
                Token::Transvection { i, j, .. } => {
                    if *i == 0 || *j == 0 || *i > p || *j > p || i == j {
                        return Err(GroupError::InvalidIndices(alloc::format!(
                            "transvection ({i}, {j}) at period {p}"
                        )));
                    }
                }
                Token::DiagUnit { pos, alpha, .. } => {
                    if *pos == 0 || *pos > p {
                        return Err(GroupError::InvalidIndices(alloc::format!(
                            "diagonal position {pos} at period {p}"
                        )));
                    }
                    if field.is_zero(alpha) {
                        return Err(MatrixError::ZeroDiagonal.into());
                    }
                }
            }
        }
        Ok(GroupWord {
            field: field.clone(),
            period,
            factors,
        })
    }

    pub fn empty(field: &Field, period: usize) -> Self {
        GroupWord {
            field: field.clone(),
            period: period.max(1),
            factors: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn factors(&self) -> &[Token] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Left-to-right product at the ambient period; the empty word is `I`.
    pub fn evaluate(&self) -> PeriodicMatrix {
        let mut m = Block::identity(&self.field, self.period);
        for tok in &self.factors {
            tok.right_multiply(&self.field, &mut m);
        }
        PeriodicMatrix::from_block(m).expect("positive period")
    }
}

pub fn is_invertible(a: &PeriodicMatrix) -> bool {
    a.is_invertible()
}

/// `A ∈ GL_s^p`: invertible with minimal period dividing `s`.
pub fn gl_membership(a: &PeriodicMatrix, s: &SteinitzNumber) -> bool {
    a.is_invertible() && s.is_multiple_of(a.period() as u64)
}

/// Outcome of an `SL_s^p` membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlMembership {
    /// Member; `level` is the smallest `m` with `A ∈ SL_m(F)` and `m | s`.
    Member { level: u64 },
    NotMember,
}

impl SlMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, SlMembership::Member { .. })
    }
}

/// Decides `A ∈ SL_s^p(F)`: some `k` with `n·k | s` and `det_n(A)^k = 1`,
/// `n` the minimal period.
///
/// Over a finite field the admissible `k` are the multiples of the order of
/// `det_n(A)`; over ℚ the only roots of unity are `±1`.
pub fn sl_membership(a: &PeriodicMatrix, s: &SteinitzNumber) -> SlMembership {
    let n = a.period() as u64;
    if !s.is_multiple_of(n) {
        return SlMembership::NotMember;
    }
    let f = a.field();
    let det = a.block().det();
    let order = if f.is_rationals() {
        if f.is_one(&det) {
            Some(1)
        } else if f.is_one(&f.neg(&det)) {
            Some(2)
        } else {
            None
        }
    } else {
        f.multiplicative_order(&det)
    };
    match order.and_then(|o| n.checked_mul(o)) {
        Some(level) if s.is_multiple_of(level) => SlMembership::Member { level },
        _ => SlMembership::NotMember,
    }
}

/// `[g, h] = g·h·g⁻¹·h⁻¹`.
pub fn commutator(g: &PeriodicMatrix, h: &PeriodicMatrix) -> Result<PeriodicMatrix, GroupError> {
    let gi = g.inverse().map_err(|_| GroupError::Singular)?;
    let hi = h.inverse().map_err(|_| GroupError::Singular)?;
    Ok(g.mul(h)?.mul(&gi)?.mul(&hi)?)
}

/// Smallest `r ∈ 1..=n` distinct from `i` and `j`, so that
/// `t_ij(a) = [t_ir(1), t_rj(a)]`.
pub fn commutator_pivot(n: usize, i: usize, j: usize) -> Option<usize> {
    (1..=n).find(|&r| r != i && r != j)
}

// Row reduction of an SL block to the identity by transvections only.
// Each recorded op `(dst, src, c)` means row dst += c · row src (0-based).
fn reduce_to_identity(mut m: Block) -> Vec<(usize, usize, Value)> {
    let f = m.field().clone();
    let n = m.size();
    let mut ops = Vec::new();
    let mut apply = |m: &mut Block, dst: usize, src: usize, c: Value| {
        if f.is_zero(&c) {
            return;
        }
        m.add_row_multiple(dst, src, &c, 0);
        ops.push((dst, src, c));
    };
    for col in 0..n.saturating_sub(1) {
        let pivot = m.at(col, col).clone();
        if !f.is_one(&pivot) {
            match (col + 1..n).find(|&r| !f.is_zero(m.at(r, col))) {
                Some(r) => {
                    // pivot + c·m[r][col] = 1
                    let c = f
                        .div(&f.sub(&f.one(), &pivot), m.at(r, col))
                        .expect("nonzero entry");
                    apply(&mut m, col, r, c);
                }
                None => {
                    // Column is zero below the pivot, so the pivot is nonzero.
                    apply(&mut m, col + 1, col, f.one());
                    let c = f
                        .div(&f.sub(&f.one(), &pivot), &pivot)
                        .expect("nonzero pivot");
                    apply(&mut m, col, col + 1, c);
                }
            }
        }
        for r in 0..n {
            if r != col {
                let c = f.neg(m.at(r, col));
                apply(&mut m, r, col, c);
            }
        }
    }
    // The last pivot equals the determinant.
    if n > 0 {
        let last = n - 1;
        for r in 0..last {
            let c = f.neg(m.at(r, last));
            apply(&mut m, r, last, c);
        }
    }
    ops
}

/// Writes `A ∈ SL_m(F)` (viewed at level `m`) as a product of transvections
/// at period `m`; at most `m² + m − 2` factors.
pub fn decompose_transvections(a: &PeriodicMatrix, m: usize) -> Result<GroupWord, GroupError> {
    let block = a.embed(m)?;
    let f = a.field();
    let det = block.det();
    if !f.is_one(&det) {
        return Err(GroupError::DetNotOne {
            level: m,
            det: f.element(det).to_string(),
        });
    }
    Ok(transvection_word(f, m, block))
}

fn transvection_word(f: &Field, m: usize, block: Block) -> GroupWord {
    // E_N ⋯ E_1 · A = I, hence A = E_1⁻¹ ⋯ E_N⁻¹.
    let factors = reduce_to_identity(block)
        .into_iter()
        .map(|(dst, src, c)| Token::Transvection {
            i: dst + 1,
            j: src + 1,
            a: f.neg(&c),
            period: m,
        })
        .collect();
    GroupWord {
        field: f.clone(),
        period: m,
        factors,
    }
}

/// Writes `A ∈ GL_m(F)` as `d_11(det A)` followed by transvections; the word
/// always carries exactly one diagonal token, equal to the determinant.
pub fn decompose_gl(a: &PeriodicMatrix, m: usize) -> Result<GroupWord, GroupError> {
    let mut block = a.embed(m)?;
    let f = a.field();
    let det = block.det();
    let det_inv = f.inv(&det).ok_or(GroupError::Singular)?;
    block.scale_row(0, &det_inv);
    let mut word = transvection_word(f, m, block);
    word.factors.insert(
        0,
        Token::DiagUnit {
            pos: 1,
            alpha: det,
            period: m,
        },
    );
    Ok(word)
}

/// Rewrites the transvection `t_ij(α)` of `M_q(F)` as a word in `E_n(A')`,
/// where `M_q(F) = M_n(A' ∩ M_q(F))`.
///
/// When `n ∤ i − j` the transvection already has off-diagonal outer position
/// and is returned as is. Otherwise it is expanded as the commutator
/// `[t_im(1), t_mj(α)]` with the smallest `m` such that `n ∤ i − m`.
pub fn lemma1_rewrite(
    field: &Field,
    i: usize,
    j: usize,
    alpha: Value,
    q: usize,
    n: usize,
) -> Result<GroupWord, GroupError> {
    if n == 0 || !q.is_multiple_of(n) {
        return Err(MatrixError::NotDivisible { period: n, m: q }.into());
    }
    if i == 0 || j == 0 || i > q || j > q || i == j {
        return Err(GroupError::InvalidIndices(alloc::format!(
            "({i}, {j}) is not an off-diagonal position of M_{q}"
        )));
    }
    let t = |i: usize, j: usize, a: Value| Token::Transvection { i, j, a, period: q };
    let differ = |a: usize, b: usize| !a.abs_diff(b).is_multiple_of(n);
    let factors = if differ(i, j) {
        alloc::vec![t(i, j, alpha)]
    } else {
        let m = (1..=q).find(|&m| differ(i, m)).ok_or_else(|| {
            GroupError::InvalidIndices(alloc::format!("no auxiliary index exists for n = {n}"))
        })?;
        alloc::vec![
            t(i, m, field.one()),
            t(m, j, alpha.clone()),
            t(i, m, field.neg(&field.one())),
            t(m, j, field.neg(&alpha)),
        ]
    };
    GroupWord::new(field, q, factors)
}

/// Whether `g` is a transvection of `M_n(M_k(F))` (or the identity): `g − I`
/// viewed at level `q` is supported on a single off-diagonal outer position.
pub fn is_block_transvection(g: &PeriodicMatrix, q: usize, n: usize) -> bool {
    let Ok(diff) = g.sub(&PeriodicMatrix::identity(g.field())) else {
        return false;
    };
    if !q.is_multiple_of(diff.period()) {
        return false;
    }
    match diff.block_view(q, n) {
        Ok(view) => match view.support().as_slice() {
            [] => true,
            [(a, b)] => a != b,
            _ => false,
        },
        Err(_) => false,
    }
}
