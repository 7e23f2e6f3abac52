//! Dense pure and mixed states over named qubit registers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

#[cfg(test)]
use super::ZERO;
use super::{c, CMatrix, CVector, C64};
use crate::error::{Error, Result};
use crate::math;
use crate::probkit::Dist;

/// Tolerance for Hermiticity, trace and positivity of density matrices.
pub const STATE_TOL: f64 = 1e-9;
/// Tolerance on the norm of pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues at or below this are treated as zero in square roots.
const SPECTRAL_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub qubits: usize,
}

impl Register {
    pub fn new(name: &str, qubits: usize) -> Self {
        Self {
            name: name.to_string(),
            qubits,
        }
    }
}

/// Ordered registers; register 0 holds the most significant qubits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Layout(Vec<Register>);

impl Layout {
    pub fn new(regs: Vec<Register>) -> Result<Self> {
        for (i, r) in regs.iter().enumerate() {
            if regs[..i].iter().any(|o| o.name == r.name) {
                return Err(Error::InvalidState(alloc::format!("duplicate register {}", r.name)));
            }
        }
        Ok(Self(regs))
    }

    pub fn registers(&self) -> &[Register] {
        &self.0
    }

    pub fn qubits(&self) -> usize {
        self.0.iter().map(|r| r.qubits).sum()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::InvalidState(alloc::format!("no register named {name}")))
    }

    /// Qubit positions (0 = most significant) of the named registers, in
    /// layout order, plus the sub-layout they form.
    fn select(&self, names: &[&str]) -> Result<(Vec<usize>, Layout)> {
        let mut picked: Vec<usize> = names.iter().map(|n| self.position(n)).collect::<Result<_>>()?;
        picked.sort_unstable();
        picked.dedup();
        let mut qubits = Vec::new();
        let mut regs = Vec::new();
        let mut offset = 0;
        for (i, r) in self.0.iter().enumerate() {
            if picked.contains(&i) {
                qubits.extend(offset..offset + r.qubits);
                regs.push(r.clone());
            }
            offset += r.qubits;
        }
        Ok((qubits, Layout(regs)))
    }

    fn complement(&self, names: &[&str]) -> Result<Vec<String>> {
        for n in names {
            self.position(n)?;
        }
        Ok(self
            .0
            .iter()
            .filter(|r| !names.contains(&r.name.as_str()))
            .map(|r| r.name.clone())
            .collect())
    }
}

/// Index tables that split a full basis index into kept and traced parts.
pub(crate) struct Split {
    /// `full[t * dk + k]` is the full index with kept part `k`, traced part `t`.
    pub(crate) full: Vec<usize>,
    pub(crate) dk: usize,
    pub(crate) dt: usize,
}

pub(crate) fn split(total: usize, keep: &[usize]) -> Split {
    let traced: Vec<usize> = (0..total).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let place = |value: usize, qubits: &[usize]| -> usize {
        let m = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(i, _)| (value >> (m - 1 - i)) & 1 == 1)
            .fold(0usize, |acc, (_, &q)| acc | (1 << (total - 1 - q)))
    };
    let kept_bits: Vec<usize> = (0..dk).map(|k| place(k, keep)).collect();
    let traced_bits: Vec<usize> = (0..dt).map(|t| place(t, &traced)).collect();
    let mut full = Vec::with_capacity(dk * dt);
    for &tb in &traced_bits {
        for &kb in &kept_bits {
            full.push(tb | kb);
        }
    }
    Split { full, dk, dt }
}

/// Hermitian eigenvalues in ascending order with eigenvectors as columns.
pub(crate) fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let e = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, col| e.eigenvectors[(r, order[col])]);
    (vals, vecs)
}

fn hermitian_error(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..=i {
            worst = worst.max(math::sqrt((m[(i, j)] - m[(j, i)].conj()).norm_sqr()));
        }
    }
    worst
}

fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

/// A density matrix over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    layout: Layout,
    rho: CMatrix,
}

impl DensityState {
    /// Validates Hermiticity, unit trace and positivity to [`STATE_TOL`].
    pub fn new(layout: Layout, rho: CMatrix) -> Result<Self> {
        let d = layout.dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::InvalidState(alloc::format!(
                "matrix is {}×{}, layout needs {d}×{d}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm = hermitian_error(&rho);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(alloc::format!("not Hermitian (error {herm:e})")));
        }
        let tr = trace_re(&rho);
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(alloc::format!("trace {tr} ≠ 1")));
        }
        let (vals, _) = eigh(&rho);
        if vals.first().is_some_and(|&v| v < -STATE_TOL) {
            return Err(Error::InvalidState(alloc::format!("negative eigenvalue {}", vals[0])));
        }
        Ok(Self { layout, rho })
    }

    pub(crate) fn new_unchecked(layout: Layout, rho: CMatrix) -> Self {
        Self { layout, rho }
    }

    /// Single register shorthand.
    pub fn single(name: &str, rho: CMatrix) -> Result<Self> {
        let d = rho.nrows();
        if !d.is_power_of_two() {
            return Err(Error::InvalidState("dimension is not a power of two".into()));
        }
        Self::new(
            Layout::new(alloc::vec![Register::new(name, d.trailing_zeros() as usize)])?,
            rho,
        )
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.rho).0
    }

    /// Traces out every register not named in `keep`.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityState> {
        let (qubits, layout) = self.layout.select(keep)?;
        let sp = split(self.layout.qubits(), &qubits);
        let mut out = CMatrix::zeros(sp.dk, sp.dk);
        for t in 0..sp.dt {
            let row = &sp.full[t * sp.dk..(t + 1) * sp.dk];
            for (a, &i) in row.iter().enumerate() {
                for (b, &j) in row.iter().enumerate() {
                    out[(a, b)] += self.rho[(i, j)];
                }
            }
        }
        Ok(DensityState::new_unchecked(layout, out))
    }

    /// Traces out the named registers.
    pub fn trace_out(&self, drop: &[&str]) -> Result<DensityState> {
        let keep = self.layout.complement(drop)?;
        let keep: Vec<&str> = keep.iter().map(String::as_str).collect();
        self.partial_trace(&keep)
    }

    /// Tensor product with `other`, whose registers come after ours.
    pub fn tensor(&self, other: &DensityState) -> Result<DensityState> {
        let mut regs = self.layout.0.clone();
        regs.extend(other.layout.0.iter().cloned());
        Ok(DensityState::new_unchecked(
            Layout::new(regs)?,
            self.rho.kronecker(&other.rho),
        ))
    }

    /// A factorization `ρ = A A†` with `A = V √Λ`. Eigenvalues at rounding
    /// level are dropped: their square roots are about 1e-8 and would leak
    /// into fidelities.
    fn factor(&self) -> CMatrix {
        let (vals, vecs) = eigh(&self.rho);
        let mut a = vecs;
        for (col, v) in vals.iter().enumerate() {
            let s = if *v > SPECTRAL_FLOOR { math::sqrt(*v) } else { 0.0 };
            for r in 0..a.nrows() {
                a[(r, col)] *= s;
            }
        }
        a
    }
}

/// A normalized state vector over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: Layout,
    amp: CVector,
}

impl PureState {
    pub fn new(layout: Layout, amp: CVector) -> Result<Self> {
        if amp.len() != layout.dim() {
            return Err(Error::InvalidState(alloc::format!(
                "vector has {} entries, layout needs {}",
                amp.len(),
                layout.dim()
            )));
        }
        let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum();
        if (math::sqrt(norm) - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(alloc::format!("norm {} ≠ 1", math::sqrt(norm))));
        }
        Ok(Self { layout, amp })
    }

    pub(crate) fn new_unchecked(layout: Layout, amp: CVector) -> Self {
        Self { layout, amp }
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(layout: Layout, index: usize) -> Result<Self> {
        let mut amp = CVector::zeros(layout.dim());
        if index >= amp.len() {
            return Err(Error::OutOfRange(alloc::format!("basis index {index}")));
        }
        amp[index] = c(1.0, 0.0);
        Ok(Self { layout, amp })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amp
    }

    pub fn density(&self) -> DensityState {
        DensityState::new_unchecked(self.layout.clone(), &self.amp * self.amp.adjoint())
    }

    /// `Ψ` with rows indexed by the named registers and columns by the rest.
    fn reshape(&self, rows: &[&str]) -> Result<(CMatrix, Layout, Split)> {
        let (qubits, layout) = self.layout.select(rows)?;
        let sp = split(self.layout.qubits(), &qubits);
        let m = CMatrix::from_fn(sp.dk, sp.dt, |k, t| self.amp[sp.full[t * sp.dk + k]]);
        Ok((m, layout, sp))
    }

    /// Reduced state on the named registers.
    pub fn reduced(&self, keep: &[&str]) -> Result<DensityState> {
        let (psi, layout, _) = self.reshape(keep)?;
        Ok(DensityState::new_unchecked(layout, &psi * psi.adjoint()))
    }

    /// Applies `u` to the named registers (in layout order).
    pub fn apply(&self, regs: &[&str], u: &CMatrix) -> Result<PureState> {
        let (psi, _, sp) = self.reshape(regs)?;
        if u.nrows() != sp.dk || u.ncols() != sp.dk {
            return Err(Error::LayoutMismatch);
        }
        let out = u * psi;
        let mut amp = CVector::zeros(self.amp.len());
        for t in 0..sp.dt {
            for k in 0..sp.dk {
                amp[sp.full[t * sp.dk + k]] = out[(k, t)];
            }
        }
        Ok(PureState::new_unchecked(self.layout.clone(), amp))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self.amp.dotc(&other.amp))
    }
}

fn same_layout(p: &DensityState, q: &DensityState) -> Result<()> {
    if p.layout != q.layout {
        return Err(Error::LayoutMismatch);
    }
    Ok(())
}

fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// `‖P − Q‖_tr` (no factor ½).
pub fn trace_distance(p: &DensityState, q: &DensityState) -> Result<f64> {
    same_layout(p, q)?;
    let (vals, _) = eigh(&(&p.rho - &q.rho));
    Ok(vals.iter().map(|v| v.abs()).sum())
}

/// `‖√P √Q‖_tr`, computed as `‖A†B‖_tr` for factorizations `P = AA†`,
/// `Q = BB†`.
pub fn fidelity(p: &DensityState, q: &DensityState) -> Result<f64> {
    same_layout(p, q)?;
    let a = p.factor();
    let b = q.factor();
    Ok(trace_norm(&(a.adjoint() * b)).min(1.0))
}

/// `[1 − ‖√P √Q‖_tr]^{1/2}`.
pub fn bures(p: &DensityState, q: &DensityState) -> Result<f64> {
    Ok(math::sqrt_clamped(1.0 - fidelity(p, q)?))
}

/// Bures distance between pure states, `[1 − |⟨ψ|φ⟩|]^{1/2}`.
pub fn bures_pure(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(math::sqrt_clamped(1.0 - math::sqrt(a.inner(b)?.norm_sqr()).min(1.0)))
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(p: &DensityState) -> f64 {
    eigh(&p.rho).0.into_iter().map(math::plogp).sum()
}

/// `I(R₁ : R₂) = S(R₁) + S(R₂) − S(R₁R₂)` for two disjoint register groups.
pub fn q_mutual_info(p: &DensityState, a: &[&str], b: &[&str]) -> Result<f64> {
    if a.iter().any(|r| b.contains(r)) {
        return Err(Error::Precondition("register groups overlap".into()));
    }
    let ab: Vec<&str> = a.iter().chain(b).copied().collect();
    let s = |g: &[&str]| p.partial_trace(g).map(|r| vn_entropy(&r));
    Ok((s(a)? + s(b)? - s(&ab)?).max(0.0))
}

/// A classical-quantum state `Σ_x p_x |x⟩⟨x| ⊗ Q_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CQState<L: Ord + Clone> {
    dist: Dist<L>,
    states: Vec<DensityState>,
}

impl<L: Ord + Clone> CQState<L> {
    /// `parts` may list a label more than once; such parts are merged
    /// with their weights.
    pub fn new(parts: Vec<(L, f64, DensityState)>) -> Result<Self> {
        let layout = parts
            .first()
            .map(|p| p.2.layout.clone())
            .ok_or_else(|| Error::InvalidState("empty cq-state".into()))?;
        if parts.iter().any(|p| p.2.layout != layout) {
            return Err(Error::LayoutMismatch);
        }
        let dist = Dist::from_pairs(parts.iter().map(|(l, w, _)| (l.clone(), *w)))?;
        let d = layout.dim();
        let mut acc: Vec<CMatrix> = alloc::vec![CMatrix::zeros(d, d); dist.len()];
        for (l, w, s) in &parts {
            let i = dist.outcomes().binary_search(l).expect("label in support");
            acc[i] += &s.rho * c(*w, 0.0);
        }
        let states = acc
            .into_iter()
            .zip(dist.probs())
            .map(|(m, &p)| {
                let m = if p > 0.0 {
                    m / c(p, 0.0)
                } else {
                    CMatrix::identity(d, d) / c(d as f64, 0.0)
                };
                DensityState::new_unchecked(layout.clone(), m)
            })
            .collect();
        Ok(Self { dist, states })
    }

    pub fn dist(&self) -> &Dist<L> {
        &self.dist
    }

    pub fn states(&self) -> &[DensityState] {
        &self.states
    }

    /// `Q = Σ_x p_x Q_x`.
    pub fn average(&self) -> DensityState {
        let d = self.states[0].dim();
        let mut m = CMatrix::zeros(d, d);
        for (s, &p) in self.states.iter().zip(self.dist.probs()) {
            m += &s.rho * c(p, 0.0);
        }
        DensityState::new_unchecked(self.states[0].layout.clone(), m)
    }

    /// The full block-diagonal density matrix with the classical register first.
    pub fn block_state(&self, label_register: &str) -> Result<DensityState> {
        let k = self.dist.len().next_power_of_two().max(2);
        let d = self.states[0].dim();
        let mut m = CMatrix::zeros(k * d, k * d);
        for (i, (s, &p)) in self.states.iter().zip(self.dist.probs()).enumerate() {
            m.view_mut((i * d, i * d), (d, d)).copy_from(&(&s.rho * c(p, 0.0)));
        }
        let mut regs = alloc::vec![Register::new(label_register, k.trailing_zeros() as usize)];
        regs.extend(self.states[0].layout.0.iter().cloned());
        Ok(DensityState::new_unchecked(Layout::new(regs)?, m))
    }

    /// Holevo quantity `I(X : Q) = S(Q) − Σ_x p_x S(Q_x)`.
    pub fn mutual_information(&self) -> f64 {
        let inner: f64 = self
            .states
            .iter()
            .zip(self.dist.probs())
            .map(|(s, &p)| if p > 0.0 { p * vn_entropy(s) } else { 0.0 })
            .sum();
        (vn_entropy(&self.average()) - inner).max(0.0)
    }

    /// Push-forward of the labels, mixing the states that merge.
    pub fn map<M: Ord + Clone, F: Fn(&L) -> M>(&self, f: F) -> Result<CQState<M>> {
        CQState::new(
            self.dist
                .iter()
                .zip(&self.states)
                .map(|((l, p), s)| (f(l), p, s.clone()))
                .collect(),
        )
    }

    /// `I(X : Q | C(X)) = Σ_c p_c I(X : Q | C = c)` for a function `C` of the label.
    pub fn conditional_mutual_information<M: Ord + Clone, F: Fn(&L) -> M>(&self, cond: F) -> Result<f64> {
        let mut groups: alloc::collections::BTreeMap<M, Vec<(L, f64, DensityState)>> = Default::default();
        for ((l, p), s) in self.dist.iter().zip(&self.states) {
            if p > 0.0 {
                groups.entry(cond(l)).or_default().push((l.clone(), p, s.clone()));
            }
        }
        let mut total = 0.0;
        for (_, mut parts) in groups {
            let mass: f64 = parts.iter().map(|p| p.1).sum();
            for p in &mut parts {
                p.1 /= mass;
            }
            total += mass * CQState::new(parts)?.mutual_information();
        }
        Ok(total)
    }
}

/// `E_x bures(Q_x, Q)²` and `κ I(X : Q)`; the first never exceeds the second.
pub fn q_avg_encoding_gap<L: Ord + Clone>(cq: &CQState<L>) -> Result<(f64, f64)> {
    let avg = cq.average();
    let mut lhs = 0.0;
    for (s, &p) in cq.states.iter().zip(cq.dist.probs()) {
        let h = bures(s, &avg)?;
        lhs += p * h * h;
    }
    Ok((lhs, math::KAPPA * cq.mutual_information()))
}

/// The unitary on the `cut` registers that best aligns `psi1` with `psi2`:
/// `bures((U ⊗ I)ψ₁, ψ₂)` equals the Bures distance of the two reduced
/// states on the complement of `cut`.
///
/// With `Ψ` the amplitude matrix (cut × rest) and `Ψ₁Ψ₂† = WΣV†`, the
/// choice `U = VW†` attains `|⟨ψ₂|(U⊗I)|ψ₁⟩| = ‖Ψ₁Ψ₂†‖_tr`. Degenerate
/// singular values leave `U` non-unique; any choice attains the optimum, and
/// the achieved distance is checked against the target.
pub fn uhlmann_unitary(psi1: &PureState, psi2: &PureState, cut: &[&str]) -> Result<CMatrix> {
    let (qubits, _) = psi1.layout.select(cut)?;
    if qubits.is_empty() {
        return Err(Error::Precondition("empty cut".into()));
    }
    uhlmann_any(psi1, psi2, cut).map(|(u, _)| u)
}

/// Same as [`uhlmann_unitary`] but accepts an empty cut (a global phase)
/// and also returns the achieved distance.
pub(crate) fn uhlmann_any(psi1: &PureState, psi2: &PureState, cut: &[&str]) -> Result<(CMatrix, f64)> {
    if psi1.layout != psi2.layout {
        return Err(Error::LayoutMismatch);
    }
    let (a, _, _) = psi1.reshape(cut)?;
    let (b, _, _) = psi2.reshape(cut)?;
    let prod = &a * b.adjoint();
    let svd = prod.svd(true, true);
    let target_f: f64 = svd.singular_values.iter().sum();
    let w = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let u = vt.adjoint() * w.adjoint();
    let aligned = psi1.apply(cut, &u)?;
    let achieved = bures_pure(&aligned, psi2)?;
    let target = math::sqrt_clamped(1.0 - target_f.min(1.0));
    if (achieved - target).abs() > 1e-6 {
        return Err(Error::AlignmentFailure { achieved, target });
    }
    Ok((u, achieved))
}

/// Checks `U†U = I` to [`STATE_TOL`].
pub fn is_unitary(u: &CMatrix) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let d = u.nrows();
    let e = u.adjoint() * u - CMatrix::identity(d, d);
    e.iter().all(|z| z.norm_sqr() <= STATE_TOL * STATE_TOL)
}

/// Random states for property tests and demos.
pub mod sample {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
        c(StandardNormal.sample(rng), StandardNormal.sample(rng))
    }

    /// Haar-random pure state.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, layout: Layout) -> PureState {
        let v = CVector::from_fn(layout.dim(), |_, _| gaussian(rng));
        let norm = math::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
        PureState::new_unchecked(layout, v / c(norm, 0.0))
    }

    /// `GG† / Tr(GG†)` for a Gaussian `G` with `rank` columns.
    pub fn random_density<R: Rng + ?Sized>(rng: &mut R, layout: Layout, rank: usize) -> DensityState {
        let d = layout.dim();
        let g = CMatrix::from_fn(d, rank.max(1), |_, _| gaussian(rng));
        let m = &g * g.adjoint();
        let tr = trace_re(&m);
        let m = m / c(tr, 0.0);
        // Symmetrize away rounding.
        let m = (&m + m.adjoint()) * c(0.5, 0.0);
        DensityState::new_unchecked(layout, m)
    }

    /// Haar-random unitary via QR of a Gaussian matrix.
    pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
        let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
        let qr = g.qr();
        let (q, r) = qr.unpack();
        let phases = DVector::from_fn(d, |i, _| {
            let z = r[(i, i)];
            let n = math::sqrt(z.norm_sqr());
            if n == 0.0 {
                c(1.0, 0.0)
            } else {
                z / c(n, 0.0)
            }
        });
        q * DMatrix::from_diagonal(&phases)
    }

    pub fn layout(regs: &[(&str, usize)]) -> Layout {
        Layout::new(regs.iter().map(|(n, q)| Register::new(n, *q)).collect()).expect("distinct names")
    }
}

#[cfg(test)]
mod tests {
    use super::sample::*;
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit(name: &str, amps: [C64; 2]) -> PureState {
        PureState::new(layout(&[(name, 1)]), CVector::from_vec(amps.to_vec())).unwrap()
    }

    #[test]
    fn distance_examples() {
        let zero = qubit("q", [c(1.0, 0.0), ZERO]).density();
        let one = qubit("q", [ZERO, c(1.0, 0.0)]).density();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let plus = qubit("q", [c(s, 0.0), c(s, 0.0)]).density();
        assert_abs_diff_eq!(trace_distance(&zero, &one).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bures(&zero, &zero).unwrap(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(bures(&zero, &plus).unwrap(), 0.541_20, epsilon = 1e-5);
        assert_abs_diff_eq!(bures(&zero, &one).unwrap(), 1.0, epsilon = 1e-12);
        let other = DensityState::single("r", zero.matrix().clone()).unwrap();
        assert_eq!(bures(&zero, &other), Err(Error::LayoutMismatch));
    }

    #[test]
    fn entropy_examples() {
        let mixed = DensityState::single("q", CMatrix::identity(2, 2) * c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(vn_entropy(&mixed), 1.0, epsilon = 1e-12);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(
            layout(&[("a", 1), ("b", 1)]),
            CVector::from_vec(alloc::vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]),
        )
        .unwrap();
        assert_abs_diff_eq!(
            q_mutual_info(&bell.density(), &["a"], &["b"]).unwrap(),
            2.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn validation() {
        let l = layout(&[("q", 1)]);
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityState::new(l.clone(), bad_trace).is_err());
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), ZERO, c(0.5, 0.0)]);
        assert!(DensityState::new(l.clone(), not_herm).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), ZERO, ZERO, c(-0.5, 0.0)]);
        assert!(DensityState::new(l.clone(), negative).is_err());
        assert!(PureState::new(l, CVector::from_vec(alloc::vec![c(1.0, 0.0), c(1.0, 0.0)])).is_err());
    }

    #[test]
    fn partial_trace_matches_pure_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = layout(&[("a", 1), ("b", 2), ("c", 1)]);
        let psi = random_pure(&mut rng, l);
        let rho = psi.density();
        for keep in [&["a"][..], &["b"], &["a", "c"], &["c", "b"]] {
            let x = rho.partial_trace(keep).unwrap();
            let y = psi.reduced(keep).unwrap();
            assert_eq!(x.layout(), y.layout());
            assert!((x.matrix() - y.matrix()).iter().all(|z| z.norm_sqr() < 1e-24));
            assert!(DensityState::new(x.layout().clone(), x.matrix().clone()).is_ok());
        }
        let dropped = rho.trace_out(&["b"]).unwrap();
        assert_eq!(dropped.layout(), rho.partial_trace(&["a", "c"]).unwrap().layout());
    }

    #[test]
    fn uhlmann_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = layout(&[("a", 2), ("b", 2)]);
        let psi = random_pure(&mut rng, l.clone());
        let u = uhlmann_unitary(&psi, &psi, &["a"]).unwrap();
        let aligned = psi.apply(&["a"], &u).unwrap();
        assert_abs_diff_eq!(bures_pure(&aligned, &psi).unwrap(), 0.0, epsilon = 1e-7);
        for _ in 0..20 {
            let p = random_pure(&mut rng, l.clone());
            let q = random_pure(&mut rng, l.clone());
            let u = uhlmann_unitary(&p, &q, &["a"]).unwrap();
            assert!(is_unitary(&u));
            let achieved = bures_pure(&p.apply(&["a"], &u).unwrap(), &q).unwrap();
            let target = bures(&p.reduced(&["b"]).unwrap(), &q.reduced(&["b"]).unwrap()).unwrap();
            assert_abs_diff_eq!(achieved, target, epsilon = 1e-6);
        }
        // Orthogonal reductions on b cannot be improved by acting on a.
        let e = |i: usize| PureState::basis(l.clone(), i).unwrap();
        let (u, d) = uhlmann_any(&e(0), &e(1), &["a"]).unwrap();
        assert!(is_unitary(&u));
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
        assert!(uhlmann_unitary(&e(0), &e(1), &[]).is_err());
    }

    #[test]
    fn cq_chain_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = layout(&[("q", 2)]);
        let parts: Vec<((u64, u64), f64, DensityState)> = (0..2u64)
            .flat_map(|x| (0..3u64).map(move |y| (x, y)))
            .map(|xy| (xy, 1.0 / 6.0, random_density(&mut rng, l.clone(), 2)))
            .collect();
        let cq = CQState::new(parts).unwrap();
        let joint = cq.mutual_information();
        let ix = cq.map(|&(x, _)| x).unwrap().mutual_information();
        let iy_x = cq.conditional_mutual_information(|&(x, _)| x).unwrap();
        assert_abs_diff_eq!(joint, ix + iy_x, epsilon = 1e-9);
        let (lhs, rhs) = q_avg_encoding_gap(&cq).unwrap();
        assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(is_unitary(&random_unitary(&mut rng, 8)));
        assert!(!is_unitary(&(CMatrix::identity(2, 2) * c(2.0, 0.0))));
    }
}
