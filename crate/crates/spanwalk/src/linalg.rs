//! Dense complex linear algebra helpers.
//!
//! Everything downstream works with small dense matrices over ℂ, so these are
//! thin wrappers around nalgebra's generic SVD and self-adjoint
//! eigendecomposition, plus a unitary eigendecomposition built from commuting
//! Hermitian parts (nalgebra has no general complex eigensolver, and the walk
//! tests need one that does not reuse the walk's own spectral construction).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative singular-value cutoff: σ below `RANK_TOL_REL`·σ_max count as zero.
pub const RANK_TOL_REL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Frobenius inner product ⟨a, b⟩ = Σ conj(a_i)·b_i.
pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.dotc(b)
}

/// One-sided Jacobi singular value decomposition.
///
/// Returns `(u, sigma, v)` with `m = u · diag(sigma) · v†`, `sigma` descending
/// of length `ncols`, `v` unitary `n×n`, and `u` of size `m×n` whose columns
/// are orthonormal where `sigma > 0` and zero where `sigma == 0`.
///
/// nalgebra's generic SVD mis-factors certain rank-deficient complex inputs
/// (unitary factors whose product does not reproduce the matrix), and masked
/// column matrices hit exactly that shape, so every rank-sensitive routine in
/// this crate goes through this decomposition instead.
pub fn jacobi_svd(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let rows = m.nrows();
    let n = m.ncols();
    if rows == 0 || n == 0 {
        return (CMat::zeros(rows, n), vec![0.0; n], CMat::identity(n, n));
    }

    let mut a = m.clone();
    let mut v = CMat::identity(n, n);
    const SWEEP_LIMIT: usize = 100;
    const ORTHO_TOL: f64 = 1e-14;
    // Columns this far below everything else are pure rounding debris;
    // rotating them risks denormal phase arithmetic, which is not unitary.
    const ABS_FLOOR: f64 = 1e-280;

    for _ in 0..SWEEP_LIMIT {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let col_p = a.column(p);
                let col_q = a.column(q);
                let norm_p = col_p.norm();
                let norm_q = col_q.norm();
                if norm_p < ABS_FLOOR || norm_q < ABS_FLOOR {
                    continue;
                }
                let app = norm_p * norm_p;
                let aqq = norm_q * norm_q;
                let apq = col_p.dotc(&col_q);
                let mag = apq.norm();
                if mag <= ORTHO_TOL * norm_p * norm_q || mag < ABS_FLOOR {
                    continue;
                }
                rotated = true;
                // Unitary J = diag(1, φ̄)·R(ϑ) diagonalizes the 2×2 Gram
                // [[app, apq], [conj(apq), aqq]]; applying J to columns
                // (p, q) of both `a` and `v` orthogonalizes the pair.
                let phase_conj = apq.conj() / mag;
                let angle = 0.5 * (2.0 * mag).atan2(app - aqq);
                let cs = angle.cos();
                let sn = angle.sin();
                for mat in [&mut a, &mut v] {
                    let (col_p, col_q) = {
                        let p_vec = mat.column(p).into_owned();
                        let q_vec = mat.column(q).into_owned();
                        (p_vec, q_vec)
                    };
                    for r in 0..mat.nrows() {
                        let xp = col_p[r];
                        let xq = col_q[r];
                        mat[(r, p)] = xp * cr(cs) + xq * (phase_conj * cr(sn));
                        mat[(r, q)] = -xp * cr(sn) + xq * (phase_conj * cr(cs));
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; sort them descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let mut u = CMat::zeros(rows, n);
    let mut sigma = vec![0.0; n];
    let mut v_sorted = CMat::zeros(n, n);
    for (slot, &j) in order.iter().enumerate() {
        sigma[slot] = norms[j];
        if norms[j] > 0.0 {
            let col = a.column(j) / cr(norms[j]);
            u.set_column(slot, &col);
        }
        v_sorted.set_column(slot, &v.column(j).into_owned());
    }
    (u, sigma, v_sorted)
}

/// Largest singular value (0 for an empty matrix).
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    jacobi_svd(m).1[0]
}

fn pinv_from_svd(u: &CMat, sigma: &[f64], v: &CMat, cutoff: f64) -> CMat {
    let mut out = CMat::zeros(v.nrows(), u.nrows());
    for (k, &s) in sigma.iter().enumerate() {
        if s > cutoff {
            let vk = v.column(k);
            let uk = u.column(k);
            out += (vk * uk.adjoint()) / cr(s);
        }
    }
    out
}

/// Moore–Penrose pseudoinverse with the relative cutoff [`RANK_TOL_REL`].
pub fn pinv(m: &CMat) -> CMat {
    if m.is_empty() {
        return CMat::zeros(m.ncols(), m.nrows());
    }
    let (u, sigma, v) = jacobi_svd(m);
    pinv_from_svd(&u, &sigma, &v, RANK_TOL_REL * sigma[0])
}

/// Pseudoinverse dropping singular values at or below an absolute `cutoff`.
///
/// Needed when `m` is a projection of some larger matrix and may consist
/// entirely of rounding noise: a cutoff relative to `m`'s own largest
/// singular value would then treat the noise as genuine rank. Callers pass
/// a cutoff scaled to the matrix `m` was derived from.
pub fn pinv_with_cutoff(m: &CMat, cutoff: f64) -> CMat {
    if m.is_empty() {
        return CMat::zeros(m.ncols(), m.nrows());
    }
    let (u, sigma, v) = jacobi_svd(m);
    pinv_from_svd(&u, &sigma, &v, cutoff.max(0.0))
}

/// Rank under the relative cutoff [`RANK_TOL_REL`].
pub fn rank(m: &CMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sigma = jacobi_svd(m).1;
    sigma.iter().filter(|&&s| s > RANK_TOL_REL * sigma[0]).count()
}

/// Orthonormal basis of the null space of `m`, as matrix columns.
///
/// Right-singular directions whose singular values fall at or below the
/// relative cutoff. For an empty (0-row) matrix the whole domain is null.
pub fn kernel_basis(m: &CMat) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 || n == 0 {
        return CMat::identity(n, n);
    }
    let (_, sigma, v) = jacobi_svd(m);
    let tol = RANK_TOL_REL * sigma[0];
    let cols: Vec<CVec> = (0..n)
        .filter(|&k| sigma[k] <= tol)
        .map(|k| v.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        return CMat::zeros(n, 0);
    }
    CMat::from_columns(&cols)
}

/// Minimum-norm least-squares solution of `a x ≈ b`.
pub fn lstsq(a: &CMat, b: &CVec) -> CVec {
    pinv(a) * b
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching orthonormal eigenvector columns.
///
/// The input is symmetrized as (H + H†)/2 first, so tiny Hermiticity
/// violations from accumulated arithmetic do not poison the decomposition.
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "hermitian_eig needs a square matrix");
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Eigendecomposition of a unitary matrix.
///
/// Returns unit-modulus eigenvalues with orthonormal eigenvector columns, and
/// the worst residual max_k ‖U v_k − μ_k v_k‖ as a quality certificate.
///
/// Method: U normal commutes with H1 = (U+U†)/2 and H2 = (U−U†)/(2i).
/// Diagonalize H1 (eigenvalues cos θ), then split each near-degenerate cosine
/// cluster by diagonalizing H2 (sin θ) restricted to it. Two phases agreeing
/// in both cos and sin are genuinely equal, so the two stages always separate
/// distinct eigenvalues.
pub fn unitary_eig(u: &CMat) -> (Vec<Complex64>, CMat, f64) {
    let n = u.nrows();
    assert_eq!(n, u.ncols(), "unitary_eig needs a square matrix");
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0), 0.0);
    }
    let ud = u.adjoint();
    let h1 = (u + &ud).scale(0.5);
    let h2 = (u - &ud).scale(0.5) * c(0.0, -1.0);
    let (vals1, vecs1) = hermitian_eig(&h1);

    const CLUSTER_TOL: f64 = 1e-8;
    let mut cols: Vec<CVec> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals1[end] - vals1[end - 1] <= CLUSTER_TOL {
            end += 1;
        }
        if end - start == 1 {
            cols.push(vecs1.column(start).into_owned());
        } else {
            let basis = vecs1.columns(start, end - start).into_owned();
            let sub = basis.adjoint() * &h2 * &basis;
            let (_, subvecs) = hermitian_eig(&sub);
            let rotated = &basis * subvecs;
            for j in 0..rotated.ncols() {
                cols.push(rotated.column(j).into_owned());
            }
        }
        start = end;
    }

    let mut eigenvalues = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    for v in &cols {
        let uv = u * v;
        let mu = v.dotc(&uv);
        residual = residual.max((&uv - v * mu).norm());
        eigenvalues.push(mu / mu.norm());
    }
    let vecs = CMat::from_columns(&cols);
    (eigenvalues, vecs, residual)
}

/// max over unit vectors ψ in the column span of `basis` of
/// |⟨e_index, ψ⟩|² / ⟨ψ|W|ψ⟩, with `weight` Hermitian positive definite on
/// that span. Returns 0 for an empty basis.
pub fn max_weighted_overlap(basis: &CMat, weight: &CMat, index: usize) -> f64 {
    if basis.ncols() == 0 {
        return 0.0;
    }
    // ψ = basis·c: maximize |u†c|² / (c†Bc) = u†B⁻¹u with u = basis†e.
    let u = basis.row(index).adjoint();
    let b = basis.adjoint() * weight * basis;
    let x = pinv(&b) * &u;
    u.dotc(&x).re
}

/// Error-free transform: `a + b` as a rounded sum plus exact rounding error.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free transform: `a · b` as a rounded product plus exact rounding
/// error (uses fused multiply-add).
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Accumulates `value` into the double-double running sum `acc`.
#[inline]
fn dd_add(acc: (f64, f64), value: f64) -> (f64, f64) {
    let (s, e) = two_sum(acc.0, value);
    (s, acc.1 + e)
}

/// `b − a·y` with every dot product carried in double-double precision, so
/// the returned residual keeps full relative accuracy even when it is of
/// order ε·‖b‖ (which is exactly when iterative refinement needs it).
fn dd_residual(a: &CMat, y: &CVec, b: &CVec) -> CVec {
    let n = a.nrows();
    let mut r = CVec::zeros(n);
    for i in 0..n {
        let mut re = (b[i].re, 0.0);
        let mut im = (b[i].im, 0.0);
        for j in 0..a.ncols() {
            let aij = a[(i, j)];
            let yj = y[j];
            let (p, e) = two_prod(aij.re, yj.re);
            re = dd_add(re, -p);
            re = dd_add(re, -e);
            let (p, e) = two_prod(aij.im, yj.im);
            re = dd_add(re, p);
            re = dd_add(re, e);
            let (p, e) = two_prod(aij.re, yj.im);
            im = dd_add(im, -p);
            im = dd_add(im, -e);
            let (p, e) = two_prod(aij.im, yj.re);
            im = dd_add(im, -p);
            im = dd_add(im, -e);
        }
        r[i] = c(re.0 + re.1, im.0 + im.1);
    }
    r
}

/// Solves `a·y = b` by LU with partial pivoting followed by two rounds of
/// iterative refinement using double-double residuals.
///
/// Plain LU loses a factor of ε·κ(a) in forward accuracy; refinement with an
/// extra-precision residual recovers the solution of the *stored* system to
/// near machine precision whenever ε·κ(a) < 1. Several ratio computations
/// deliberately probe κ(a) ≈ 1/λ² ≈ 1e10, where that difference is four
/// orders of magnitude.
///
/// Returns `None` when LU detects a singular matrix.
pub fn refined_lu_solve(a: &CMat, b: &CVec) -> Option<CVec> {
    let lu = a.clone().lu();
    let mut y = lu.solve(b)?;
    for _ in 0..2 {
        let r = dd_residual(a, &y, b);
        match lu.solve(&r) {
            Some(dy) => y += dy,
            None => break,
        }
    }
    Some(y)
}

/// An unnormalized double-double value `hi + lo` used as an accumulator.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        Dd {
            hi: s,
            lo: self.lo + e,
        }
    }

    fn add(self, other: Dd) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        Dd {
            hi: s,
            lo: self.lo + other.lo + e,
        }
    }

    fn mul_f64(self, s: f64) -> Self {
        let (p, e) = two_prod(self.hi, s);
        Dd {
            hi: p,
            lo: self.lo * s + e,
        }
    }

    fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// A complex double-double accumulator.
#[derive(Clone, Copy)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    fn zero() -> Self {
        CDd {
            re: Dd::new(0.0),
            im: Dd::new(0.0),
        }
    }

    /// Accumulates `w · z` for an f64 complex `w` and double-double `z`.
    fn add_prod(self, w: Complex64, z: CDd) -> Self {
        CDd {
            re: self
                .re
                .add(z.re.mul_f64(w.re))
                .add(z.im.mul_f64(w.im).neg()),
            im: self.im.add(z.re.mul_f64(w.im)).add(z.im.mul_f64(w.re)),
        }
    }

    fn from_c(w: Complex64) -> Self {
        CDd {
            re: Dd::new(w.re),
            im: Dd::new(w.im),
        }
    }

    fn value(self) -> Complex64 {
        c(self.re.value(), self.im.value())
    }
}

/// `b − (a†a + diag(d))·y` with the product carried through both matrix
/// applications in double-double precision, never forming the Gram matrix.
fn dd_gram_residual(a: &CMat, d: &[f64], y: &CVec, b: &CVec) -> CVec {
    let rows = a.nrows();
    let n = a.ncols();
    // z = a·y in double-double.
    let mut z = vec![CDd::zero(); rows];
    for i in 0..rows {
        for j in 0..n {
            z[i] = z[i].add_prod(a[(i, j)], CDd::from_c(y[j]));
        }
    }
    // r = b − a†·z − d∘y, still in double-double.
    let mut r = CVec::zeros(n);
    for j in 0..n {
        let mut acc = CDd::from_c(b[j]);
        for i in 0..rows {
            let w = -a[(i, j)].conj();
            acc = acc.add_prod(w, z[i]);
        }
        acc = acc.add_prod(cr(-d[j]), CDd::from_c(y[j]));
        r[j] = acc.value();
    }
    r
}

/// Solves `(a†a + diag(d))·y = b` by LU plus iterative refinement, with
/// residuals evaluated against the *factored* left-hand side `a†(a·y) + d∘y`
/// in double-double precision.
///
/// Forming the Gram matrix explicitly rounds it, which shifts eigenvalues
/// near zero by ~ε‖a‖² — fatal when the system is probed at a deliberate
/// near-singularity of that size. Refining against the factored form instead
/// converges to the exact solution for the stored factor `a`.
///
/// Returns `None` when LU detects a singular matrix.
pub fn refined_gram_solve(a: &CMat, d: &[f64], b: &CVec) -> Option<CVec> {
    let n = a.ncols();
    assert_eq!(d.len(), n);
    let mut w = a.adjoint() * a;
    for j in 0..n {
        w[(j, j)] += cr(d[j]);
    }
    let lu = w.lu();
    let mut y = lu.solve(b)?;
    for _ in 0..3 {
        let r = dd_gram_residual(a, d, &y, b);
        match lu.solve(&r) {
            Some(dy) => y += dy,
            None => break,
        }
    }
    Some(y)
}
