use crate::error::{Error, Result};

use super::SymTridiag;

/// Pivots with `|d| < ZERO_PIVOT_REL_TOL * scale` are classified as zero,
/// where `scale` is the max-norm of the block row that produced the pivot.
pub const ZERO_PIVOT_REL_TOL: f64 = 1e-11;

/// Bunch–Kaufman growth constant `(1 + sqrt 17) / 8`.
const BK_ALPHA: f64 = 0.640_388_203_202_208_4;

/// Symmetric block-tridiagonal matrix with square blocks of a common size.
///
/// `off[i]` is the block in block-row `i`, block-column `i + 1`; its
/// transpose sits below the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTridiag {
    size: usize,
    diag: Vec<Vec<f64>>,
    off: Vec<Vec<f64>>,
}

/// Eigenvalue sign counts relative to a shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inertia {
    pub n_minus: usize,
    pub n_zero: usize,
    pub n_plus: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.n_minus + self.n_zero + self.n_plus
    }
}

impl BlockTridiag {
    /// Blocks are row-major `size * size` slices.
    pub fn new(size: usize, diag: Vec<Vec<f64>>, off: Vec<Vec<f64>>) -> Result<Self> {
        if size == 0 || diag.is_empty() {
            return Err(Error::invalid(
                "block-tridiagonal matrix needs at least one block",
            ));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::invalid(format!(
                "{} diagonal blocks need {} off-diagonal blocks, got {}",
                diag.len(),
                diag.len() - 1,
                off.len()
            )));
        }
        let nn = size * size;
        for (i, b) in diag.iter().enumerate() {
            if b.len() != nn {
                return Err(Error::invalid(format!("diagonal block {i} has wrong size")));
            }
            let scale = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for r in 0..size {
                for c in 0..r {
                    if (b[r * size + c] - b[c * size + r]).abs() > 1e-14 * scale.max(1.0) {
                        return Err(Error::invalid(format!(
                            "diagonal block {i} is not symmetric"
                        )));
                    }
                }
            }
        }
        for (i, b) in off.iter().enumerate() {
            if b.len() != nn {
                return Err(Error::invalid(format!(
                    "off-diagonal block {i} has wrong size"
                )));
            }
        }
        if diag
            .iter()
            .chain(off.iter())
            .flatten()
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid(
                "block-tridiagonal matrix has non-finite entries",
            ));
        }
        Ok(Self { size, diag, off })
    }

    pub fn block_size(&self) -> usize {
        self.size
    }

    pub fn n_blocks(&self) -> usize {
        self.diag.len()
    }

    pub fn dim(&self) -> usize {
        self.size * self.diag.len()
    }

    pub fn diag_block(&self, i: usize) -> &[f64] {
        &self.diag[i]
    }

    pub fn off_block(&self, i: usize) -> &[f64] {
        &self.off[i]
    }

    pub fn max_norm(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.off.iter())
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Entry `(row, col)` of the assembled matrix.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let s = self.size;
        let (bi, ri) = (row / s, row % s);
        let (bj, cj) = (col / s, col % s);
        if bi == bj {
            self.diag[bi][ri * s + cj]
        } else if bj == bi + 1 {
            self.off[bi][ri * s + cj]
        } else if bi == bj + 1 {
            self.off[bj][cj * s + ri]
        } else {
            0.0
        }
    }

    /// Dense row-major copy; meant for small matrices in tests and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Applies the same symmetric permutation inside every block:
    /// new local index `k` takes old local index `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let s = self.size;
        let mut seen = vec![false; s];
        if perm.len() != s
            || perm
                .iter()
                .any(|&p| p >= s || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::invalid("permutation does not match the block size"));
        }
        let apply = |b: &Vec<f64>| {
            let mut out = vec![0.0; s * s];
            for r in 0..s {
                for c in 0..s {
                    out[r * s + c] = b[perm[r] * s + perm[c]];
                }
            }
            out
        };
        Ok(Self {
            size: s,
            diag: self.diag.iter().map(apply).collect(),
            off: self.off.iter().map(apply).collect(),
        })
    }
}

impl From<&SymTridiag> for BlockTridiag {
    fn from(t: &SymTridiag) -> Self {
        Self {
            size: 1,
            diag: t.diag().iter().map(|&d| vec![d]).collect(),
            off: t.offdiag().iter().map(|&e| vec![e]).collect(),
        }
    }
}

/// Dense symmetric `P A Pᵀ = L D Lᵀ` with Bunch–Kaufman 1x1/2x2 pivots.
struct DenseLdlt {
    n: usize,
    a: Vec<f64>,
    swaps: Vec<(usize, usize)>,
    // 1 or 2 per pivot start, 0 for the second row of a 2x2 pivot
    pivot: Vec<u8>,
}

impl DenseLdlt {
    fn factor(mut a: Vec<f64>, n: usize, zero_tol: f64, inertia: &mut Inertia) -> Self {
        let mut swaps = Vec::new();
        let mut pivot = vec![0u8; n];
        let mut k = 0;
        while k < n {
            let akk = a[k * n + k].abs();
            let (mut imax, mut colmax) = (k, 0.0_f64);
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > colmax {
                    colmax = v;
                    imax = i;
                }
            }
            let mut two = false;
            let mut kp = k;
            if akk.max(colmax) == 0.0 {
                // exactly singular column: keep a tiny 1x1 pivot so solves stay finite
                a[k * n + k] = zero_tol.max(f64::MIN_POSITIVE);
                inertia.n_zero += 1;
                pivot[k] = 1;
                k += 1;
                continue;
            } else if akk < BK_ALPHA * colmax {
                let mut rowmax = 0.0_f64;
                for j in k..n {
                    if j != imax {
                        rowmax = rowmax.max(a[imax * n + j].abs());
                    }
                }
                if akk * rowmax >= BK_ALPHA * colmax * colmax {
                    kp = k;
                } else if a[imax * n + imax].abs() >= BK_ALPHA * rowmax {
                    kp = imax;
                } else {
                    kp = imax;
                    two = true;
                }
            }
            let target = if two { k + 1 } else { k };
            if kp != target {
                sym_swap(&mut a, n, target, kp);
                swaps.push((target, kp));
            }

            if !two {
                let mut d = a[k * n + k];
                classify(d, zero_tol, inertia);
                if d.abs() < zero_tol {
                    d = if d < 0.0 { -zero_tol } else { zero_tol };
                    a[k * n + k] = d;
                }
                // row k still holds the unscaled column k
                for i in k + 1..n {
                    let l = a[i * n + k] / d;
                    for j in k + 1..=i {
                        a[i * n + j] -= l * a[k * n + j];
                    }
                    a[i * n + k] = l;
                }
                for i in k + 1..n {
                    for j in k + 1..i {
                        a[j * n + i] = a[i * n + j];
                    }
                }
                pivot[k] = 1;
                k += 1;
            } else {
                let (p, q, r) = (a[k * n + k], a[(k + 1) * n + k], a[(k + 1) * n + k + 1]);
                let det = p * r - q * q;
                let half_tr = 0.5 * (p + r);
                let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
                classify(half_tr - disc, zero_tol, inertia);
                classify(half_tr + disc, zero_tol, inertia);
                for i in k + 2..n {
                    let (x, y) = (a[i * n + k], a[i * n + k + 1]);
                    let l1 = (x * r - y * q) / det;
                    let l2 = (y * p - x * q) / det;
                    for j in k + 2..=i {
                        a[i * n + j] -= l1 * a[k * n + j] + l2 * a[(k + 1) * n + j];
                    }
                    a[i * n + k] = l1;
                    a[i * n + k + 1] = l2;
                }
                for i in k + 2..n {
                    for j in k + 2..i {
                        a[j * n + i] = a[i * n + j];
                    }
                }
                pivot[k] = 2;
                pivot[k + 1] = 0;
                k += 2;
            }
        }
        Self { n, a, swaps, pivot }
    }

    /// Overwrites the `ncols` columns of row-major `b` (`n x ncols`) with `A⁻¹ b`.
    fn solve_in_place(&self, b: &mut [f64], ncols: usize) {
        let n = self.n;
        let a = &self.a;
        for &(i, j) in &self.swaps {
            for c in 0..ncols {
                b.swap(i * ncols + c, j * ncols + c);
            }
        }
        // L z = y
        let mut k = 0;
        while k < n {
            let w = self.pivot[k] as usize;
            for i in k + w..n {
                for t in k..k + w {
                    let l = a[i * n + t];
                    if l != 0.0 {
                        for c in 0..ncols {
                            b[i * ncols + c] -= l * b[t * ncols + c];
                        }
                    }
                }
            }
            k += w;
        }
        // D w = z
        let mut k = 0;
        while k < n {
            if self.pivot[k] == 1 {
                let d = a[k * n + k];
                for c in 0..ncols {
                    b[k * ncols + c] /= d;
                }
                k += 1;
            } else {
                let (p, q, r) = (a[k * n + k], a[(k + 1) * n + k], a[(k + 1) * n + k + 1]);
                let det = p * r - q * q;
                for c in 0..ncols {
                    let (x, y) = (b[k * ncols + c], b[(k + 1) * ncols + c]);
                    b[k * ncols + c] = (r * x - q * y) / det;
                    b[(k + 1) * ncols + c] = (p * y - q * x) / det;
                }
                k += 2;
            }
        }
        // Lᵀ v = w
        let mut starts = Vec::new();
        let mut k = 0;
        while k < n {
            starts.push(k);
            k += self.pivot[k] as usize;
        }
        for &k in starts.iter().rev() {
            let w = self.pivot[k] as usize;
            for t in k..k + w {
                for i in k + w..n {
                    let l = a[i * n + t];
                    if l != 0.0 {
                        for c in 0..ncols {
                            b[t * ncols + c] -= l * b[i * ncols + c];
                        }
                    }
                }
            }
        }
        for &(i, j) in self.swaps.iter().rev() {
            for c in 0..ncols {
                b.swap(i * ncols + c, j * ncols + c);
            }
        }
    }
}

fn sym_swap(a: &mut [f64], n: usize, i: usize, j: usize) {
    for c in 0..n {
        a.swap(i * n + c, j * n + c);
    }
    for r in 0..n {
        a.swap(r * n + i, r * n + j);
    }
}

fn classify(d: f64, zero_tol: f64, inertia: &mut Inertia) {
    if d.abs() < zero_tol {
        inertia.n_zero += 1;
    } else if d < 0.0 {
        inertia.n_minus += 1;
    } else {
        inertia.n_plus += 1;
    }
}

/// Inertia of `b - shift * I` from a block `LDLᵀ` factorization (Schur
/// complements along the block diagonal, each factored with Bunch–Kaufman
/// pivoting). By Sylvester's law `n_minus` is the number of eigenvalues
/// below `shift` whenever `n_zero == 0`; callers that see `n_zero > 0`
/// should retry at a nearby shift.
pub fn ldlt_inertia(b: &BlockTridiag, shift: f64) -> Result<Inertia> {
    if !shift.is_finite() {
        return Err(Error::invalid(format!("non-finite shift {shift}")));
    }
    let s = b.size;
    let nb = b.n_blocks();
    let mut inertia = Inertia::default();

    let row_scale = |i: usize| {
        let mut m = b.diag[i].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if i > 0 {
            m = b.off[i - 1].iter().fold(m, |m, v| m.max(v.abs()));
        }
        if i + 1 < nb {
            m = b.off[i].iter().fold(m, |m, v| m.max(v.abs()));
        }
        m.max(shift.abs()).max(f64::MIN_POSITIVE)
    };

    let mut schur = b.diag[0].clone();
    for i in 0..nb {
        for r in 0..s {
            schur[r * s + r] -= shift;
        }
        if schur.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBreakdown { shift });
        }
        let zero_tol = ZERO_PIVOT_REL_TOL * row_scale(i);
        let fac = DenseLdlt::factor(schur, s, zero_tol, &mut inertia);
        if i + 1 == nb {
            break;
        }
        let coupling = &b.off[i];
        let mut x = coupling.clone();
        fac.solve_in_place(&mut x, s);
        let mut next = b.diag[i + 1].clone();
        // next -= couplingᵀ x, lower triangle then mirror
        for k in 0..s {
            for r in 0..s {
                let c_kr = coupling[k * s + r];
                if c_kr == 0.0 {
                    continue;
                }
                let xrow = &x[k * s..k * s + s];
                for c in 0..=r {
                    next[r * s + c] -= c_kr * xrow[c];
                }
            }
        }
        for r in 0..s {
            for c in 0..r {
                next[c * s + r] = next[r * s + c];
            }
        }
        schur = next;
    }
    if inertia.dim() != b.dim() {
        return Err(Error::NumericalBreakdown { shift });
    }
    Ok(inertia)
}
