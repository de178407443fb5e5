//! Periodic infinite matrices `diag(a, a, …)` stored by their minimal block.
//!
//! All public indices are 1-based.

use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{divisors, lcm_usize};
use crate::fields::{Field, FieldError, Value};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("entries do not form a {0}x{0} array")]
    Ragged(usize),
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("period {period} does not divide {m}")]
    NotDivisible { period: usize, m: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("transvection needs distinct indices, got ({0}, {0})")]
    EqualIndices(usize),
    #[error("diagonal unit needs a nonzero scalar")]
    ZeroDiagonal,
    #[error("{0}")]
    Shape(String),
}

/// A dense square matrix over a field: one diagonal block, or a finite view
/// of a periodic matrix at some level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    field: Field,
    size: usize,
    data: Vec<Value>,
}

impl Block {
    pub fn zeros(field: &Field, size: usize) -> Self {
        Block {
            field: field.clone(),
            size,
            data: alloc::vec![field.zero(); size * size],
        }
    }

    pub fn identity(field: &Field, size: usize) -> Self {
        let mut b = Self::zeros(field, size);
        for i in 0..size {
            b.data[i * size + i] = field.one();
        }
        b
    }

    /// Builds a block from rows of raw values.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Value>>) -> Result<Self, MatrixError> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(MatrixError::Ragged(size));
        }
        Ok(Block {
            field: field.clone(),
            size,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> &Value {
        &self.data[r * self.size + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: Value) {
        self.data[r * self.size + c] = v;
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Value {
        self.at(i - 1, j - 1)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Value]> {
        self.data.chunks(self.size.max(1)).take(self.size)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|r| {
            (0..self.size).all(|c| {
                let v = self.at(r, c);
                if r == c {
                    self.field.is_one(v)
                } else {
                    self.field.is_zero(v)
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    fn check(&self, other: &Block) -> Result<(), MatrixError> {
        self.field.check_same(&other.field)?;
        if self.size != other.size {
            return Err(MatrixError::Shape(alloc::format!(
                "size {} vs {}",
                self.size, other.size
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Block) -> Result<Block, MatrixError> {
        self.check(other)?;
        Ok(self.zip(other, |f, a, b| f.add(a, b)))
    }

    pub fn sub(&self, other: &Block) -> Result<Block, MatrixError> {
        self.check(other)?;
        Ok(self.zip(other, |f, a, b| f.sub(a, b)))
    }

    fn zip(&self, other: &Block, op: impl Fn(&Field, &Value, &Value) -> Value) -> Block {
        Block {
            field: self.field.clone(),
            size: self.size,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| op(&self.field, a, b))
                .collect(),
        }
    }

    pub fn map(&self, op: impl Fn(&Field, &Value) -> Value) -> Block {
        Block {
            field: self.field.clone(),
            size: self.size,
            data: self.data.iter().map(|a| op(&self.field, a)).collect(),
        }
    }

    pub fn neg(&self) -> Block {
        self.map(|f, a| f.neg(a))
    }

    pub fn scale(&self, alpha: &Value) -> Block {
        self.map(|f, a| f.mul(alpha, a))
    }

    pub fn mul(&self, other: &Block) -> Result<Block, MatrixError> {
        self.check(other)?;
        let n = self.size;
        let f = &self.field;
        let mut out = Block::zeros(f, n);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..n {
                    let b = other.at(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let acc = f.add(out.at(r, c), &f.mul(a, b));
                    out.set(r, c, acc);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Block {
        let n = self.size;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    /// `diag(self, …, self)` with `copies` blocks.
    pub fn repeat(&self, copies: usize) -> Block {
        let n = self.size;
        let m = n * copies;
        let mut out = Block::zeros(&self.field, m);
        for b in 0..copies {
            for r in 0..n {
                for c in 0..n {
                    out.set(b * n + r, b * n + c, self.at(r, c).clone());
                }
            }
        }
        out
    }

    /// Determinant by elimination with first-nonzero pivoting.
    pub fn det(&self) -> Value {
        let f = &self.field;
        let n = self.size;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !f.is_zero(m.at(r, col))) else {
                return f.zero();
            };
            if pivot != col {
                m.swap_rows(pivot, col);
                det = f.neg(&det);
            }
            let p = m.at(col, col).clone();
            det = f.mul(&det, &p);
            let p_inv = f.inv(&p).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(m.at(r, col), &p_inv);
                if f.is_zero(&factor) {
                    continue;
                }
                m.add_row_multiple(r, col, &f.neg(&factor), col);
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Block> {
        let f = &self.field;
        let n = self.size;
        let mut m = self.clone();
        let mut inv = Block::identity(f, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(m.at(r, col)))?;
            if pivot != col {
                m.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p_inv = f.inv(m.at(col, col)).expect("nonzero pivot");
            m.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for r in 0..n {
                if r == col || f.is_zero(m.at(r, col)) {
                    continue;
                }
                let factor = f.neg(m.at(r, col));
                m.add_row_multiple(r, col, &factor, 0);
                inv.add_row_multiple(r, col, &factor, 0);
            }
        }
        Some(inv)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        let n = self.size;
        for c in 0..n {
            self.data.swap(a * n + c, b * n + c);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, alpha: &Value) {
        for c in 0..self.size {
            let v = self.field.mul(alpha, self.at(r, c));
            self.set(r, c, v);
        }
    }

    /// row `dst` += `factor` · row `src`, touching columns from `from_col` on.
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &Value, from_col: usize) {
        for c in from_col..self.size {
            let s = self.at(src, c);
            if self.field.is_zero(s) {
                continue;
            }
            let v = self.field.add(self.at(dst, c), &self.field.mul(factor, s));
            self.set(dst, c, v);
        }
    }

    /// Smallest `d | size` such that the block is `diag(b, …, b)` for a `d×d` block `b`.
    pub fn minimal_period(&self) -> usize {
        let n = self.size;
        let f = &self.field;
        divisors(n)
            .into_iter()
            .find(|&d| {
                (0..n).all(|r| {
                    (0..n).all(|c| {
                        let v = self.at(r, c);
                        if r / d == c / d {
                            v == self.at(r % d, c % d)
                        } else {
                            f.is_zero(v)
                        }
                    })
                })
            })
            .unwrap_or(n)
    }

    /// Leading `d×d` principal block.
    fn leading(&self, d: usize) -> Block {
        let mut out = Block::zeros(&self.field, d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, self.at(r, c).clone());
            }
        }
        out
    }
}

/// A periodic infinite matrix in canonical (minimal-period) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicMatrix {
    block: Block,
}

impl PeriodicMatrix {
    /// Canonicalizes an `n`-periodic matrix given by its `n×n` block.
    pub fn from_block(block: Block) -> Result<Self, MatrixError> {
        if block.size == 0 {
            return Err(MatrixError::ZeroPeriod);
        }
        let d = block.minimal_period();
        let block = if d == block.size { block } else { block.leading(d) };
        Ok(PeriodicMatrix { block })
    }

    /// The matrix `diag(a, a, …)` where `a` is the `n×n` array `entries`.
    pub fn make(field: &Field, n: usize, entries: Vec<Vec<Value>>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::ZeroPeriod);
        }
        if entries.len() != n {
            return Err(MatrixError::Ragged(n));
        }
        Self::from_block(Block::from_rows(field, entries)?)
    }

    pub fn identity(field: &Field) -> Self {
        PeriodicMatrix {
            block: Block::identity(field, 1),
        }
    }

    pub fn zero(field: &Field) -> Self {
        PeriodicMatrix {
            block: Block::zeros(field, 1),
        }
    }

    /// The central element `α·I`.
    pub fn scalar(field: &Field, alpha: Value) -> Self {
        PeriodicMatrix {
            block: Block {
                field: field.clone(),
                size: 1,
                data: alloc::vec![alpha],
            },
        }
    }

    /// `t_ij(a) = I + e_ij(a)` at period `n`.
    pub fn transvection(field: &Field, n: usize, i: usize, j: usize, a: Value) -> Result<Self, MatrixError> {
        check_index(i, n)?;
        check_index(j, n)?;
        if i == j {
            return Err(MatrixError::EqualIndices(i));
        }
        let mut b = Block::identity(field, n);
        b.set(i - 1, j - 1, a);
        Self::from_block(b)
    }

    /// `d_pos(α) = diag(1, …, α, …, 1)` at period `n`, `α` in position `pos`.
    pub fn diag_unit(field: &Field, n: usize, pos: usize, alpha: Value) -> Result<Self, MatrixError> {
        check_index(pos, n)?;
        if field.is_zero(&alpha) {
            return Err(MatrixError::ZeroDiagonal);
        }
        let mut b = Block::identity(field, n);
        b.set(pos - 1, pos - 1, alpha);
        Self::from_block(b)
    }

    /// The idempotent `ē_i`: the image of the matrix unit `e_ii` of `M_n`
    /// under the diagonal embedding into `M_q`.
    pub fn ebar(field: &Field, n: usize, q: usize, i: usize) -> Result<Self, MatrixError> {
        if n == 0 || !q.is_multiple_of(n) {
            return Err(MatrixError::NotDivisible { period: n, m: q });
        }
        check_index(i, n)?;
        let mut b = Block::zeros(field, n);
        b.set(i - 1, i - 1, field.one());
        Self::from_block(b.repeat(q / n))
    }

    pub fn field(&self) -> &Field {
        &self.block.field
    }

    /// The minimal period.
    pub fn period(&self) -> usize {
        self.block.size
    }

    /// Alias of [`period`](Self::period): canonical form is minimal.
    pub fn minimal_period(&self) -> usize {
        self.block.size
    }

    pub fn block(&self) -> &Block {
        &self.block
    }

    /// Entry `(i, j)` of the infinite matrix, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Value {
        let n = self.period();
        let (i, j) = (i - 1, j - 1);
        if i / n == j / n {
            self.block.at(i % n, j % n).clone()
        } else {
            self.field().zero()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.block.is_identity()
    }

    /// The `m×m` block `diag(a, …, a)`; requires `period | m`.
    pub fn embed(&self, m: usize) -> Result<Block, MatrixError> {
        let n = self.period();
        if m == 0 || !m.is_multiple_of(n) {
            return Err(MatrixError::NotDivisible { period: n, m });
        }
        Ok(self.block.repeat(m / n))
    }

    fn lifted(&self, other: &Self) -> Result<(Block, Block), MatrixError> {
        self.field().check_same(other.field())?;
        let m = lcm_usize(self.period(), other.period());
        Ok((self.embed(m)?, other.embed(m)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        let (a, b) = self.lifted(other)?;
        Self::from_block(a.add(&b)?)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        let (a, b) = self.lifted(other)?;
        Self::from_block(a.sub(&b)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        let (a, b) = self.lifted(other)?;
        Self::from_block(a.mul(&b)?)
    }

    pub fn neg(&self) -> Self {
        PeriodicMatrix {
            block: self.block.neg(),
        }
    }

    pub fn scalar_mul(&self, alpha: &Value) -> Self {
        Self::from_block(self.block.scale(alpha)).expect("nonempty block")
    }

    pub fn transpose(&self) -> Self {
        PeriodicMatrix {
            block: self.block.transpose(),
        }
    }

    /// Applies `op` to every entry. `op` must fix zero for the result to be
    /// the entrywise image of the infinite matrix.
    pub fn map_entries(&self, op: impl Fn(&Field, &Value) -> Value) -> Self {
        Self::from_block(self.block.map(op)).expect("nonempty block")
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let inv = self.block.inverse().ok_or(MatrixError::Singular)?;
        Self::from_block(inv)
    }

    pub fn is_invertible(&self) -> bool {
        !self.field().is_zero(&self.block.det())
    }

    /// Determinant of the `m×m` block; requires `period | m`.
    pub fn det_at(&self, m: usize) -> Result<Value, MatrixError> {
        Ok(self.embed(m)?.det())
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self, MatrixError> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

fn check_index(i: usize, bound: usize) -> Result<(), MatrixError> {
    if i == 0 || i > bound {
        Err(MatrixError::IndexOutOfRange { index: i, bound })
    } else {
        Ok(())
    }
}

/// `M_q(F)` viewed as `M_n(M_k(F))`, `q = n·k`.
///
/// Global index `i` splits as `i = (l − 1)·n + ī` with `1 ≤ ī ≤ n` (outer,
/// the `M_n` coordinate) and `1 ≤ l ≤ k` (inner, the centralizer coordinate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockView {
    outer: usize,
    inner: usize,
    blocks: Vec<Block>,
}

/// Splits a 1-based global index into `(outer ī, inner l)`.
pub fn split_index(i: usize, n: usize) -> (usize, usize) {
    ((i - 1) % n + 1, (i - 1) / n + 1)
}

/// Inverse of [`split_index`].
pub fn join_index(outer: usize, inner: usize, n: usize) -> usize {
    (inner - 1) * n + outer
}

impl BlockView {
    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    /// The `k×k` block at outer position `(ī, j̄)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Block {
        &self.blocks[(i - 1) * self.outer + (j - 1)]
    }

    /// Outer positions `(ī, j̄)` carrying a nonzero block, row-major.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n = self.outer;
        (0..n * n)
            .filter(|&idx| !self.blocks[idx].is_zero())
            .map(|idx| (idx / n + 1, idx % n + 1))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        (1..=self.outer).all(|i| {
            (1..=self.outer).all(|j| {
                let b = self.get(i, j);
                if i == j {
                    b.is_identity()
                } else {
                    b.is_zero()
                }
            })
        })
    }

    pub fn add(&self, other: &BlockView) -> Result<BlockView, MatrixError> {
        self.check(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(BlockView { blocks, ..*self })
    }

    pub fn mul(&self, other: &BlockView) -> Result<BlockView, MatrixError> {
        self.check(other)?;
        let n = self.outer;
        let field = self.blocks[0].field();
        let mut blocks = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = Block::zeros(field, self.inner);
                for l in 1..=n {
                    acc = acc.add(&self.get(i, l).mul(other.get(l, j))?)?;
                }
                blocks.push(acc);
            }
        }
        Ok(BlockView { blocks, ..*self })
    }

    fn check(&self, other: &BlockView) -> Result<(), MatrixError> {
        if (self.outer, self.inner) != (other.outer, other.inner) {
            return Err(MatrixError::Shape("block views of different shapes".into()));
        }
        Ok(())
    }

    /// The `q×q` block this view re-indexes.
    pub fn to_block(&self) -> Block {
        let (n, k) = (self.outer, self.inner);
        let q = n * k;
        let mut out = Block::zeros(self.blocks[0].field(), q);
        for gi in 1..=q {
            let (oi, li) = split_index(gi, n);
            for gj in 1..=q {
                let (oj, lj) = split_index(gj, n);
                out.set(gi - 1, gj - 1, self.get(oi, oj).entry(li, lj).clone());
            }
        }
        out
    }

    pub fn unblock(&self) -> PeriodicMatrix {
        PeriodicMatrix::from_block(self.to_block()).expect("nonempty block")
    }
}

impl PeriodicMatrix {
    /// Re-indexes the `q×q` block as an `n×n` array of `k×k` blocks, `k = q/n`.
    pub fn block_view(&self, q: usize, n: usize) -> Result<BlockView, MatrixError> {
        let big = self.embed(q)?;
        if n == 0 || !q.is_multiple_of(n) {
            return Err(MatrixError::NotDivisible { period: n, m: q });
        }
        let k = q / n;
        let field = self.field();
        let mut blocks = alloc::vec![Block::zeros(field, k); n * n];
        for gi in 1..=q {
            let (oi, li) = split_index(gi, n);
            for gj in 1..=q {
                let (oj, lj) = split_index(gj, n);
                blocks[(oi - 1) * n + (oj - 1)].set(li - 1, lj - 1, big.entry(gi, gj).clone());
            }
        }
        Ok(BlockView {
            outer: n,
            inner: k,
            blocks,
        })
    }
}
