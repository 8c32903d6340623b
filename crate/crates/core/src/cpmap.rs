//! Completely positive unital generating maps E : M_d ⊗ M_r → M_r.
//!
//! A map is stored as a superoperator matrix of shape r² × (d·r)² acting on
//! column-stacked vectorizations (see [`ComplexMatrix::vec`]). When a
//! Stinespring dilation is known it is stored alongside: an isometry
//! V : C^r → (C^d ⊗ C^m) ⊗ C^r with E(a ⊗ T) = V†(a ⊗ I_m ⊗ T)V. The
//! multiplicity `m` is 1 for maps built from an isometry C^r → C^d ⊗ C^r and
//! equals the Kraus rank for dilations recovered from a Choi matrix.

use crate::error::{Error, Result};
use crate::linalg::{self, apply_on_axis, herm_eig, isometry_defect, ComplexMatrix, ZERO};

/// Default tolerance for isometry and complete-positivity checks.
pub const CP_TOL: f64 = 1e-8;

/// Finite list of local d×d observables a₁, …, a_n at consecutive sites,
/// standing for a₁ ⊗ … ⊗ a_n.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Word {
    letters: Vec<ComplexMatrix>,
}

impl Word {
    pub fn new(letters: Vec<ComplexMatrix>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// I_d repeated `n` times.
    pub fn identity(d: usize, n: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(d); n])
    }

    pub fn letters(&self) -> &[ComplexMatrix] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self ⊗ other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        for (k, a) in self.letters.iter().enumerate() {
            if a.shape() != (d, d) {
                return Err(Error::ShapeMismatch(format!(
                    "letter {k} is {}x{}, expected {d}x{d}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(())
    }

    /// The full operator a₁ ⊗ … ⊗ a_n (1×1 identity for the empty word).
    pub fn to_operator(&self) -> ComplexMatrix {
        if self.letters.is_empty() {
            return ComplexMatrix::identity(1);
        }
        linalg::kron_all(&self.letters)
    }
}

impl From<Vec<ComplexMatrix>> for Word {
    fn from(letters: Vec<ComplexMatrix>) -> Self {
        Word::new(letters)
    }
}

/// Stinespring isometry V : C^r → (C^d ⊗ C^m) ⊗ C^r, rows ordered as
/// `((i·m + k)·r + t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub v: ComplexMatrix,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpMapData {
    d: usize,
    r: usize,
    superop: ComplexMatrix,
    dilation: Option<Dilation>,
    kraus_slices: Option<Vec<ComplexMatrix>>,
}

/// C = Σ_{μν} e_{μν} ⊗ E(e_{μν}) over the matrix units of M_d ⊗ M_r.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub d: usize,
    pub r: usize,
}

impl ChoiMatrix {
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eig(&self.matrix.hermitian_part()).expect("Hermitian part is Hermitian")
    }

    /// CP iff the smallest eigenvalue is ≥ −tol·max(1, Tr C).
    pub fn is_cp(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.scale()
    }

    fn scale(&self) -> f64 {
        self.matrix.trace().re.abs().max(1.0)
    }
}

impl CpMapData {
    /// Wraps a superoperator without checking positivity.
    pub fn from_superop(superop: ComplexMatrix, d: usize, r: usize) -> Result<Self> {
        check_dims(d, r)?;
        let expected = (r * r, d * d * r * r);
        if superop.shape() != expected {
            return Err(Error::ShapeMismatch(format!(
                "superoperator is {:?}, expected {:?}",
                superop.shape(),
                expected
            )));
        }
        Ok(Self {
            d,
            r,
            superop,
            dilation: None,
            kraus_slices: None,
        })
    }

    /// Builds E(x) = V†(x ⊗ I_m arranged per site)V from a Stinespring
    /// isometry with the given multiplicity of the local factor.
    pub fn from_dilation(v: ComplexMatrix, d: usize, multiplicity: usize, r: usize) -> Result<Self> {
        check_dims(d, r)?;
        if multiplicity == 0 {
            return Err(Error::InvalidArgument("dilation multiplicity must be positive".into()));
        }
        let expected = (d * multiplicity * r, r);
        if v.shape() != expected {
            return Err(Error::ShapeMismatch(format!(
                "isometry is {:?}, expected {:?}",
                v.shape(),
                expected
            )));
        }
        let deviation = isometry_defect(&v);
        if deviation > CP_TOL {
            return Err(Error::NotIsometry { deviation });
        }
        let dilation = Dilation { v, multiplicity };
        let slices = slices_of(&dilation, d, r);
        let superop = superop_from_slices(&slices, d, multiplicity, r);
        Ok(Self {
            d,
            r,
            superop,
            dilation: Some(dilation),
            kraus_slices: Some(slices),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn superop(&self) -> &ComplexMatrix {
        &self.superop
    }

    pub fn dilation(&self) -> Option<&Dilation> {
        self.dilation.as_ref()
    }

    pub fn stinespring(&self) -> Option<&ComplexMatrix> {
        self.dilation.as_ref().map(|d| &d.v)
    }

    /// Σ_ι with Σ_ι χ = V†(δ_ι ⊗ χ), ι = i·m + k.
    pub fn kraus_slices(&self) -> Option<&[ComplexMatrix]> {
        self.kraus_slices.as_deref()
    }

    /// Same map, with a Stinespring dilation attached (recovered from the
    /// Choi matrix when absent).
    pub fn with_dilation(&self) -> Result<CpMapData> {
        if self.dilation.is_some() {
            return Ok(self.clone());
        }
        stinespring_from_choi(&self.superop, self.d, self.r, CP_TOL)
    }

    /// Image of a single monomial a ⊗ T.
    pub fn apply_monomial(&self, a: &ComplexMatrix, t: &ComplexMatrix) -> ComplexMatrix {
        self.apply_unchecked(&a.kron(t))
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::unvec(&self.superop.mul_vec(&x.vec()), self.r, self.r)
    }
}

fn check_dims(d: usize, r: usize) -> Result<()> {
    if d == 0 || r == 0 {
        return Err(Error::InvalidArgument(format!(
            "dimensions must be positive (d={d}, r={r})"
        )));
    }
    Ok(())
}

fn slices_of(dilation: &Dilation, d: usize, r: usize) -> Vec<ComplexMatrix> {
    let v = &dilation.v;
    (0..d * dilation.multiplicity)
        .map(|iota| ComplexMatrix::from_fn(r, r, |u, t| v[(iota * r + t, u)].conj()))
        .collect()
}

/// E(e_{(i,s),(j,t)}) = Σ_k Σ_{ik} |s⟩⟨t| Σ_{jk}†, vectorized column-wise.
fn superop_from_slices(slices: &[ComplexMatrix], d: usize, m: usize, r: usize) -> ComplexMatrix {
    let dr = d * r;
    let mut sup = ComplexMatrix::zeros(r * r, dr * dr);
    for i in 0..d {
        for s in 0..r {
            let mu = i * r + s;
            for j in 0..d {
                for t in 0..r {
                    let nu = j * r + t;
                    let col = nu * dr + mu;
                    for k in 0..m {
                        let a = &slices[i * m + k];
                        let b = &slices[j * m + k];
                        for w in 0..r {
                            let bw = b[(w, t)].conj();
                            if bw == ZERO {
                                continue;
                            }
                            for u in 0..r {
                                sup[(w * r + u, col)] += a[(u, s)] * bw;
                            }
                        }
                    }
                }
            }
        }
    }
    sup
}

/// Map E(a ⊗ T) = V†(a ⊗ T)V for an isometry V : C^r → C^d ⊗ C^r.
pub fn cp_from_isometry(v: &ComplexMatrix, d: usize, r: usize) -> Result<CpMapData> {
    CpMapData::from_dilation(v.clone(), d, 1, r)
}

/// E(x) for x ∈ M_d ⊗ M_r given as a (d·r)×(d·r) matrix.
pub fn apply(cp: &CpMapData, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = cp.d * cp.r;
    if x.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "argument is {:?}, expected {n}x{n}",
            x.shape()
        )));
    }
    Ok(cp.apply_unchecked(x))
}

pub fn choi(cp: &CpMapData) -> ChoiMatrix {
    choi_of_superop(&cp.superop, cp.d, cp.r)
}

pub fn choi_of_superop(superop: &ComplexMatrix, d: usize, r: usize) -> ChoiMatrix {
    let dr = d * r;
    let n = dr * r;
    let matrix = ComplexMatrix::from_fn(n, n, |row, col| {
        let (mu, s) = (row / r, row % r);
        let (nu, t) = (col / r, col % r);
        superop[(t * r + s, nu * dr + mu)]
    });
    ChoiMatrix { matrix, d, r }
}

/// Inverse of [`choi_of_superop`].
pub fn superop_from_choi(choi: &ChoiMatrix) -> ComplexMatrix {
    let (d, r) = (choi.d, choi.r);
    let dr = d * r;
    let mut sup = ComplexMatrix::zeros(r * r, dr * dr);
    for mu in 0..dr {
        for nu in 0..dr {
            for s in 0..r {
                for t in 0..r {
                    sup[(t * r + s, nu * dr + mu)] = choi.matrix[(mu * r + s, nu * r + t)];
                }
            }
        }
    }
    sup
}

/// Recovers a minimal Stinespring dilation from the Choi matrix.
///
/// C = Σ λ_k |w_k⟩⟨w_k| yields Kraus operators K_k[μ, s] = √λ_k · conj(w_k[μ·r + s]);
/// they are stacked into V on (C^d ⊗ C^K) ⊗ C^r, K the Kraus rank.
pub fn stinespring_from_choi(superop: &ComplexMatrix, d: usize, r: usize, tol: f64) -> Result<CpMapData> {
    let cp = CpMapData::from_superop(superop.clone(), d, r)?;
    let c = choi(&cp);
    let eig = herm_eig(&c.matrix.hermitian_part())?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol * c.scale() {
        return Err(Error::NotCp { min_eigenvalue: min });
    }
    let unit = cp.apply_unchecked(&ComplexMatrix::identity(d * r));
    let deviation = unit.max_abs_diff(&ComplexMatrix::identity(r));
    if deviation > tol {
        return Err(Error::NotUnital { deviation });
    }
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > 1e-12 * top)
        .collect();
    let m = kept.len();
    let dr = d * r;
    let mut v = ComplexMatrix::zeros(d * m * r, r);
    for (k, &idx) in kept.iter().enumerate() {
        let w = eig.eigenvector(idx);
        let amp = eig.eigenvalues[idx].sqrt();
        for mu in 0..dr {
            let (i, t) = (mu / r, mu % r);
            for s in 0..r {
                v[((i * m + k) * r + t, s)] = w[mu * r + s].conj() * amp;
            }
        }
    }
    let deviation = isometry_defect(&v);
    if deviation > tol {
        return Err(Error::NotIsometry { deviation });
    }
    let dilation = Dilation { v, multiplicity: m };
    let slices = slices_of(&dilation, d, r);
    Ok(CpMapData {
        d,
        r,
        superop: superop.clone(),
        dilation: Some(dilation),
        kraus_slices: Some(slices),
    })
}

/// E_(n)(a₁ ⊗ … ⊗ a_n ⊗ t) by the right-to-left recursion
/// E_(n+1) = E ∘ (id ⊗ E_(n)).
pub fn iterate(cp: &CpMapData, word: &Word, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    word.check_dim(cp.d)?;
    check_reduced(cp, t)?;
    let mut acc = t.clone();
    for a in word.letters().iter().rev() {
        acc = cp.apply_monomial(a, &acc);
    }
    Ok(acc)
}

/// E_(n)(x ⊗ t) for a general x ∈ M_d^{⊗n} given as a d^n × d^n matrix
/// (first site most significant), by expanding the first site in matrix
/// units: E_(n)(x ⊗ t) = Σ_ij E(e_ij ⊗ E_(n−1)(x_ij ⊗ t)).
pub fn iterate_operator(cp: &CpMapData, x: &ComplexMatrix, n: usize, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_reduced(cp, t)?;
    let dim =
        cp.d.checked_pow(n as u32)
            .ok_or_else(|| Error::InvalidArgument("window too long".into()))?;
    if x.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {:?}, expected {dim}x{dim} for {n} sites",
            x.shape()
        )));
    }
    Ok(iterate_operator_unchecked(cp, x, n, t))
}

fn iterate_operator_unchecked(cp: &CpMapData, x: &ComplexMatrix, n: usize, t: &ComplexMatrix) -> ComplexMatrix {
    if n == 0 {
        return t.scale(x[(0, 0)]);
    }
    let d = cp.d;
    let block = x.rows() / d;
    let mut acc = ComplexMatrix::zeros(cp.r, cp.r);
    for i in 0..d {
        for j in 0..d {
            let sub = x.submatrix(i * block, j * block, block, block);
            if sub.max_abs() == 0.0 {
                continue;
            }
            let inner = iterate_operator_unchecked(cp, &sub, n - 1, t);
            let out = cp.apply_monomial(&linalg::matrix_unit(d, i, j), &inner);
            acc = &acc + &out;
        }
    }
    acc
}

fn check_reduced(cp: &CpMapData, t: &ComplexMatrix) -> Result<()> {
    if t.shape() != (cp.r, cp.r) {
        return Err(Error::ShapeMismatch(format!(
            "reduced argument is {:?}, expected {}x{}",
            t.shape(),
            cp.r,
            cp.r
        )));
    }
    Ok(())
}

/// E_(n) evaluated in one shot through the n-fold dilation
/// V_(n) = (I ⊗ V_(n−1))V, i.e. V_(n)†(A₁ ⊗ … ⊗ A_n ⊗ T)V_(n).
///
/// This never goes through the superoperator and serves as the independent
/// side of [`markov_check`].
pub fn iterate_dilated(cp: &CpMapData, word: &Word, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    word.check_dim(cp.d)?;
    check_reduced(cp, t)?;
    let dilation = cp
        .dilation
        .as_ref()
        .ok_or_else(|| Error::NoDilation("map carries no Stinespring isometry".into()))?;
    let (d, r, m) = (cp.d, cp.r, dilation.multiplicity);
    let site = d * m;
    let n = word.len();
    if n == 0 {
        return Ok(t.clone());
    }
    let v = &dilation.v;
    // rows of V_(k) index (ι₁, …, ι_k, s)
    let mut vn = v.clone();
    for _ in 1..n {
        let prev_rows = vn.rows();
        let mut next = ComplexMatrix::zeros(site * prev_rows, r);
        for iota in 0..site {
            // V_(k+1)[(ι, rest), t] = Σ_s V_(k)[rest, s] · V[(ι, s), t]
            for rest in 0..prev_rows {
                for col in 0..r {
                    let mut acc = ZERO;
                    for s in 0..r {
                        acc += vn[(rest, s)] * v[(iota * r + s, col)];
                    }
                    next[(iota * prev_rows + rest, col)] = acc;
                }
            }
        }
        vn = next;
    }
    let mut dims = vec![site; n];
    dims.push(r);
    let local: Vec<ComplexMatrix> = word
        .letters()
        .iter()
        .map(|a| a.kron(&ComplexMatrix::identity(m)))
        .collect();
    let mut applied = ComplexMatrix::zeros(vn.rows(), r);
    for col in 0..r {
        let mut x = vn.column(col);
        for (axis, op) in local.iter().enumerate() {
            x = apply_on_axis(&x, &dims, axis, op);
        }
        x = apply_on_axis(&x, &dims, n, t);
        for (row, z) in x.into_iter().enumerate() {
            applied[(row, col)] = z;
        }
    }
    Ok(vn.dagger().matmul(&applied))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovCheck {
    pub residual: f64,
    pub passed: bool,
}

/// Compares E_(m+n)(x ⊗ y ⊗ t), evaluated through the joint dilation, with
/// E_(m)(x ⊗ E_(n)(y ⊗ t)) evaluated by nested recursion.
pub fn markov_check(cp: &CpMapData, word_x: &Word, word_y: &Word, t: &ComplexMatrix, tol: f64) -> Result<MarkovCheck> {
    word_x.check_dim(cp.d)?;
    word_y.check_dim(cp.d)?;
    check_reduced(cp, t)?;
    if word_y.is_empty() {
        // E_(0) is the identity, so both sides are literally E_(m).
        return Ok(MarkovCheck {
            residual: 0.0,
            passed: true,
        });
    }
    let dilated = cp.with_dilation()?;
    let joint = iterate_dilated(&dilated, &word_x.concat(word_y), t)?;
    let inner = iterate(cp, word_y, t)?;
    let nested = iterate(cp, word_x, &inner)?;
    let residual = joint.distance(&nested);
    Ok(MarkovCheck {
        residual,
        passed: residual <= tol,
    })
}

/// ‖E(I) − I‖ (entrywise max).
pub fn unitality_defect(cp: &CpMapData) -> f64 {
    cp.apply_unchecked(&ComplexMatrix::identity(cp.d * cp.r))
        .max_abs_diff(&ComplexMatrix::identity(cp.r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_unit, pauli_basis, ONE};
    use num_complex::Complex64;

    fn identity_channel(r: usize) -> CpMapData {
        cp_from_isometry(&ComplexMatrix::identity(r), 1, r).unwrap()
    }

    #[test]
    fn identity_channel_acts_trivially() {
        let cp = identity_channel(2);
        let t = pauli_basis()[1].clone();
        let out = apply(&cp, &ComplexMatrix::identity(1).kron(&t)).unwrap();
        assert_eq!(out, t);
    }

    #[test]
    fn identity_channel_choi_is_rank_one() {
        let c = choi(&identity_channel(2));
        let e = herm_eig(&c.matrix).unwrap();
        let expect = [0.0, 0.0, 0.0, 2.0];
        for (a, b) in e.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        // C = Σ e_{μν} ⊗ e_{μν}
        for mu in 0..2 {
            for nu in 0..2 {
                assert_eq!(c.matrix[(mu * 2 + mu, nu * 2 + nu)], ONE);
            }
        }
    }

    #[test]
    fn product_state_isometry_gives_vector_state() {
        let s = 1.0 / 2f64.sqrt();
        let psi = ComplexMatrix::from_real_rows(&[&[s], &[s]]);
        let cp = cp_from_isometry(&psi, 2, 1).unwrap();
        let x = &pauli_basis()[1];
        let lambda = ComplexMatrix::from_real_rows(&[&[3.0]]);
        let out = cp.apply_monomial(x, &lambda);
        // ⟨ψ|σ¹|ψ⟩ = 1
        assert!((out[(0, 0)] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_isometries() {
        let v = ComplexMatrix::identity(2).scale_re(1.01);
        assert!(matches!(cp_from_isometry(&v, 1, 2), Err(Error::NotIsometry { .. })));
        assert!(matches!(
            cp_from_isometry(&ComplexMatrix::identity(2), 2, 2),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn apply_rejects_wrong_shape() {
        let cp = identity_channel(2);
        assert!(matches!(
            apply(&cp, &ComplexMatrix::identity(3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn choi_superop_roundtrip_is_exact() {
        let cp = identity_channel(3);
        let c = choi(&cp);
        assert_eq!(&superop_from_choi(&c), cp.superop());
    }

    #[test]
    fn non_cp_map_is_rejected() {
        // Transpose map on M_2 (d = 1) is positive but not CP.
        let r = 2;
        let mut sup = ComplexMatrix::zeros(4, 4);
        for i in 0..r {
            for j in 0..r {
                let x = matrix_unit(r, i, j);
                let y = x.transpose();
                let col = x.vec().iter().position(|z| *z == ONE).unwrap();
                for (row, z) in y.vec().into_iter().enumerate() {
                    sup[(row, col)] = z;
                }
            }
        }
        assert!(matches!(
            stinespring_from_choi(&sup, 1, r, CP_TOL),
            Err(Error::NotCp { .. })
        ));
    }

    #[test]
    fn empty_second_word_has_zero_markov_residual() {
        let cp = identity_channel(2);
        let x = Word::identity(1, 2);
        let check = markov_check(&cp, &x, &Word::empty(), &ComplexMatrix::identity(2), 1e-12).unwrap();
        assert_eq!(check.residual, 0.0);
        assert!(check.passed);
    }

    #[test]
    fn iterate_base_case_matches_apply() {
        let s = 1.0 / 2f64.sqrt();
        let v = ComplexMatrix::from_real_rows(&[&[s, 0.0], &[0.0, s], &[0.0, s], &[s, 0.0]]);
        let cp = cp_from_isometry(&v, 2, 2).unwrap();
        let a = pauli_basis()[2].clone();
        let t = pauli_basis()[1].clone();
        let one = iterate(&cp, &Word::new(vec![a.clone()]), &t).unwrap();
        assert_eq!(one, apply(&cp, &a.kron(&t)).unwrap());
    }
}
