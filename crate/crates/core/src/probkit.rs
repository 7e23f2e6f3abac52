//! Exact finite probability distributions and classical information measures.
//!
//! All entropies and mutual informations are in bits. Distances follow the
//! usual conventions: `l1_distance` is the unnormalized sum `Σ|P(i) − Q(i)|`
//! (range `[0, 2]`) and `hellinger` is `[½ Σ (√P(i) − √Q(i))²]^{1/2}`
//! (range `[0, 1]`).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math::{self, MASS_TOL};

pub use crate::math::KAPPA;

/// Compensated (Neumaier) sum.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn check_weights(probs: &[f64]) -> Result<()> {
    if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidDistribution(alloc::format!(
            "weight {p} is negative or not finite"
        )));
    }
    let total = stable_sum(probs.iter().copied());
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(alloc::format!("weights sum to {total}")));
    }
    Ok(())
}

/// A distribution over an explicit finite sample space.
///
/// Outcomes are kept sorted and unique. Zero-weight outcomes are allowed and
/// are part of the sample space.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist<L> {
    outcomes: Vec<L>,
    probs: Vec<f64>,
}

impl<L: Ord + Clone> Dist<L> {
    /// Builds a distribution from parallel outcome and weight lists.
    pub fn new(outcomes: Vec<L>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probs.len() {
            return Err(Error::InvalidDistribution(
                "outcome and weight counts differ".to_string(),
            ));
        }
        check_weights(&probs)?;
        let mut pairs: Vec<(L, f64)> = outcomes.into_iter().zip(probs).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("duplicate outcome label".to_string()));
        }
        let (outcomes, probs) = pairs.into_iter().unzip();
        Ok(Self { outcomes, probs })
    }

    /// Builds a distribution from `(label, weight)` pairs, merging repeated
    /// labels. The weights must already sum to one.
    pub fn from_pairs<I: IntoIterator<Item = (L, f64)>>(pairs: I) -> Result<Self> {
        let mut pairs: Vec<(L, f64)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut outcomes: Vec<L> = Vec::with_capacity(pairs.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pairs.len());
        for (l, p) in pairs {
            match outcomes.last() {
                Some(last) if *last == l => *probs.last_mut().unwrap() += p,
                _ => {
                    outcomes.push(l);
                    probs.push(p);
                }
            }
        }
        check_weights(&probs)?;
        Ok(Self { outcomes, probs })
    }

    /// Like [`Dist::from_pairs`] but rescales nonnegative weights to unit mass.
    pub fn normalized<I: IntoIterator<Item = (L, f64)>>(pairs: I) -> Result<Self> {
        let pairs: Vec<(L, f64)> = pairs.into_iter().collect();
        let total = stable_sum(pairs.iter().map(|p| p.1));
        if total.is_nan() || total <= 0.0 || total.is_infinite() {
            return Err(Error::InvalidDistribution("total weight is zero".to_string()));
        }
        Self::from_pairs(pairs.into_iter().map(|(l, w)| (l, w / total)))
    }

    pub fn uniform<I: IntoIterator<Item = L>>(outcomes: I) -> Result<Self> {
        let outcomes: Vec<L> = outcomes.into_iter().collect();
        let n = outcomes.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("empty sample space".to_string()));
        }
        Self::new(outcomes, alloc::vec![1.0 / n as f64; n])
    }

    pub fn point(label: L) -> Self {
        Self {
            outcomes: alloc::vec![label],
            probs: alloc::vec![1.0],
        }
    }

    pub fn outcomes(&self) -> &[L] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, f64)> + '_ {
        self.outcomes.iter().zip(self.probs.iter().copied())
    }

    /// Outcomes with positive weight.
    pub fn support(&self) -> impl Iterator<Item = (&L, f64)> + '_ {
        self.iter().filter(|(_, p)| *p > 0.0)
    }

    /// Probability of `label`; zero when the label is outside the space.
    pub fn prob(&self, label: &L) -> f64 {
        self.outcomes.binary_search(label).map(|i| self.probs[i]).unwrap_or(0.0)
    }

    pub fn same_space(&self, other: &Self) -> bool {
        self.outcomes == other.outcomes
    }

    /// The same distribution over a larger sample space: every label in
    /// `extra` not already present is added with weight zero.
    pub fn extend_space<I: IntoIterator<Item = L>>(&self, extra: I) -> Self {
        let mut pairs: Vec<(L, f64)> = self.iter().map(|(l, p)| (l.clone(), p)).collect();
        pairs.extend(extra.into_iter().map(|l| (l, 0.0)));
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut outcomes: Vec<L> = Vec::with_capacity(pairs.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pairs.len());
        for (l, p) in pairs {
            match outcomes.last() {
                Some(last) if *last == l => *probs.last_mut().unwrap() += p,
                _ => {
                    outcomes.push(l);
                    probs.push(p);
                }
            }
        }
        Self { outcomes, probs }
    }

    /// Both distributions re-expressed over the union of their sample spaces.
    pub fn align(p: &Self, q: &Self) -> (Self, Self) {
        (
            p.extend_space(q.outcomes.iter().cloned()),
            q.extend_space(p.outcomes.iter().cloned()),
        )
    }

    /// Push-forward through `f`; labels mapping to the same image merge.
    pub fn map<M: Ord + Clone, F: FnMut(&L) -> M>(&self, mut f: F) -> Dist<M> {
        Dist::from_pairs(self.iter().map(|(l, p)| (f(l), p))).expect("push-forward preserves mass")
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        stable_sum(self.probs.iter().map(|&p| math::plogp(p)))
    }

    /// Mixture `Σ αᵢ Pᵢ` of distributions on one common sample space.
    pub fn mixture(weights: &[f64], parts: &[Self]) -> Result<Self> {
        if weights.len() != parts.len() || parts.is_empty() {
            return Err(Error::InvalidDistribution(
                "mixture needs one weight per component".to_string(),
            ));
        }
        check_weights(weights)?;
        if parts.iter().any(|d| !d.same_space(&parts[0])) {
            return Err(Error::SampleSpaceMismatch);
        }
        let probs = (0..parts[0].len())
            .map(|i| stable_sum(weights.iter().zip(parts).map(|(w, d)| w * d.probs[i])))
            .collect();
        Ok(Self {
            outcomes: parts[0].outcomes.clone(),
            probs,
        })
    }
}

fn require_same_space<L: Ord + Clone>(p: &Dist<L>, q: &Dist<L>) -> Result<()> {
    if p.same_space(q) {
        Ok(())
    } else {
        Err(Error::SampleSpaceMismatch)
    }
}

/// `Σᵢ |P(i) − Q(i)|`.
pub fn l1_distance<L: Ord + Clone>(p: &Dist<L>, q: &Dist<L>) -> Result<f64> {
    require_same_space(p, q)?;
    Ok(stable_sum(p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs())))
}

/// Hellinger distance `[½ Σᵢ (√P(i) − √Q(i))²]^{1/2}`.
pub fn hellinger<L: Ord + Clone>(p: &Dist<L>, q: &Dist<L>) -> Result<f64> {
    require_same_space(p, q)?;
    let half_sq = 0.5
        * stable_sum(p.probs.iter().zip(&q.probs).map(|(a, b)| {
            let d = math::sqrt(*a) - math::sqrt(*b);
            d * d
        }));
    Ok(math::sqrt_clamped(half_sq))
}

/// `H(p) = −p log₂ p − (1−p) log₂(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(alloc::format!(
            "binary entropy argument {p} outside [0, 1]"
        )));
    }
    Ok(math::plogp(p) + math::plogp(1.0 - p))
}

/// A joint distribution of several discrete variables.
///
/// Each variable ("factor") takes opaque `u64` values; the table is stored
/// sparsely with rows sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    names: Vec<String>,
    values: Vec<u64>,
    probs: Vec<f64>,
}

impl Joint {
    /// Builds a joint table from `(values, weight)` rows. Repeated rows are
    /// merged; weights must sum to one.
    pub fn new<S, I, R>(names: &[S], rows: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (R, f64)>,
        R: AsRef<[u64]>,
    {
        let arity = names.len();
        if arity == 0 {
            return Err(Error::InvalidDistribution("joint needs a factor".to_string()));
        }
        let mut flat: Vec<u64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (row, w) in rows {
            let row = row.as_ref();
            if row.len() != arity {
                return Err(Error::InvalidDistribution(alloc::format!(
                    "row has {} values, expected {arity}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
            weights.push(w);
        }
        check_weights(&weights)?;
        let (values, probs) = merge_rows(arity, &flat, &weights);
        Ok(Self {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            values,
            probs,
        })
    }

    /// Product of independent marginals.
    pub fn product<S: AsRef<str>>(names: &[S], marginals: &[Dist<u64>]) -> Result<Self> {
        if names.len() != marginals.len() {
            return Err(Error::InvalidDistribution("one name per marginal required".to_string()));
        }
        let mut rows: Vec<(Vec<u64>, f64)> = alloc::vec![(Vec::new(), 1.0)];
        for m in marginals {
            let mut next = Vec::with_capacity(rows.len() * m.len());
            for (row, w) in &rows {
                for (v, p) in m.iter() {
                    let mut r = row.clone();
                    r.push(*v);
                    next.push((r, w * p));
                }
            }
            rows = next;
        }
        Self::new(names, rows)
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of stored rows (support size, counting explicit zero rows).
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[u64], f64)> + '_ {
        self.values.chunks_exact(self.arity()).zip(self.probs.iter().copied())
    }

    fn check_factors(&self, group: &[usize]) -> Result<()> {
        match group.iter().find(|&&f| f >= self.arity()) {
            Some(f) => Err(Error::OutOfRange(alloc::format!(
                "factor {f} of a {}-variable joint",
                self.arity()
            ))),
            None => Ok(()),
        }
    }

    /// Joint of the listed factors, in the listed order.
    pub fn marginal(&self, group: &[usize]) -> Result<Joint> {
        self.check_factors(group)?;
        if group.is_empty() {
            return Err(Error::InvalidDistribution("empty factor group".to_string()));
        }
        let (values, probs) = self.project(group);
        Ok(Joint {
            names: group.iter().map(|&i| self.names[i].clone()).collect(),
            values,
            probs,
        })
    }

    /// The marginal of a factor group as a [`Dist`] over value tuples.
    pub fn marginal_dist(&self, group: &[usize]) -> Result<Dist<Vec<u64>>> {
        let m = self.marginal(group)?;
        Ok(Dist {
            outcomes: m.values.chunks_exact(group.len()).map(|c| c.to_vec()).collect(),
            probs: m.probs,
        })
    }

    /// The distribution of the remaining factors given `given = value`.
    ///
    /// Conditioning on a zero-probability value is an error.
    pub fn conditional(&self, given: &[usize], value: &[u64]) -> Result<Joint> {
        self.check_factors(given)?;
        if given.len() != value.len() {
            return Err(Error::OutOfRange("condition arity mismatch".to_string()));
        }
        let rest: Vec<usize> = (0..self.arity()).filter(|i| !given.contains(i)).collect();
        if rest.is_empty() {
            return Err(Error::InvalidDistribution(
                "nothing left after conditioning".to_string(),
            ));
        }
        let mut flat = Vec::new();
        let mut weights = Vec::new();
        for (row, p) in self.rows() {
            if given.iter().zip(value).all(|(&g, &v)| row[g] == v) {
                flat.extend(rest.iter().map(|&i| row[i]));
                weights.push(p);
            }
        }
        let mass = stable_sum(weights.iter().copied());
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::ZeroProbabilityCondition);
        }
        weights.iter_mut().for_each(|w| *w /= mass);
        let (values, probs) = merge_rows(rest.len(), &flat, &weights);
        Ok(Joint {
            names: rest.iter().map(|&i| self.names[i].clone()).collect(),
            values,
            probs,
        })
    }

    /// Entropy `H(group)` in bits; the empty group has entropy zero.
    pub fn entropy(&self, group: &[usize]) -> Result<f64> {
        self.check_factors(group)?;
        if group.is_empty() {
            return Ok(0.0);
        }
        let (_, probs) = self.project(group);
        Ok(stable_sum(probs.iter().map(|&p| math::plogp(p))))
    }

    /// `I(A:B) = H(A) + H(B) − H(AB)` for disjoint factor groups.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        self.conditional_mutual_information(a, b, &[])
    }

    /// `I(A:B|C) = H(AC) + H(BC) − H(ABC) − H(C)` for disjoint factor groups.
    pub fn conditional_mutual_information(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
        let cat = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
        let ac = cat(a, c);
        let bc = cat(b, c);
        let abc = cat(&ac, b);
        let mut sorted = abc.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(
                "mutual information needs disjoint factor groups".to_string(),
            ));
        }
        let v = self.entropy(&ac)? + self.entropy(&bc)? - self.entropy(&abc)? - self.entropy(c)?;
        Ok(v.max(0.0))
    }

    /// Rows projected onto `group`, merged and sorted.
    fn project(&self, group: &[usize]) -> (Vec<u64>, Vec<f64>) {
        let k = group.len();
        let mut flat = Vec::with_capacity(self.len() * k);
        for (row, _) in self.rows() {
            flat.extend(group.iter().map(|&i| row[i]));
        }
        merge_rows(k, &flat, &self.probs)
    }
}

/// Sorts rows of a flat `arity`-strided table and merges duplicates.
fn merge_rows(arity: usize, flat: &[u64], weights: &[f64]) -> (Vec<u64>, Vec<f64>) {
    let row = |i: usize| &flat[i * arity..(i + 1) * arity];
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_unstable_by(|&a, &b| row(a).cmp(row(b)));
    let mut values: Vec<u64> = Vec::with_capacity(flat.len());
    let mut probs: Vec<f64> = Vec::with_capacity(weights.len());
    let mut prev: Option<usize> = None;
    for i in order {
        match prev {
            Some(p) if row(p).cmp(row(i)) == Ordering::Equal => {
                *probs.last_mut().unwrap() += weights[i];
            }
            _ => {
                values.extend_from_slice(row(i));
                probs.push(weights[i]);
            }
        }
        prev = Some(i);
    }
    (values, probs)
}

/// `I(X:Y)` of a two-variable joint.
pub fn mutual_information(j: &Joint) -> Result<f64> {
    if j.arity() != 2 {
        return Err(Error::Precondition("expected a joint over X×Y".to_string()));
    }
    j.mutual_information(&[0], &[1])
}

/// `I(X:Y|Z)` of a three-variable joint.
pub fn conditional_mutual_information(j: &Joint) -> Result<f64> {
    if j.arity() != 3 {
        return Err(Error::Precondition("expected a joint over X×Y×Z".to_string()));
    }
    j.conditional_mutual_information(&[0], &[1], &[2])
}

/// Both sides of the average encoding inequality for a joint over `A×B`:
/// `lhs = E_{b←B} h(A|b, A)²` and `rhs = κ·I(A:B)`.
pub fn avg_encoding_gap(j: &Joint) -> Result<(f64, f64)> {
    if j.arity() != 2 {
        return Err(Error::Precondition("expected a joint over A×B".to_string()));
    }
    let a = j.marginal_dist(&[0])?;
    let b = j.marginal_dist(&[1])?;
    let mut terms = Vec::with_capacity(b.len());
    for (bv, pb) in b.support() {
        let cond = j.conditional(&[1], bv)?.marginal_dist(&[0])?;
        let cond = cond.extend_space(a.outcomes().iter().cloned());
        let h = hellinger(&cond, &a)?;
        terms.push(pb * h * h);
    }
    Ok((stable_sum(terms), KAPPA * mutual_information(j)?))
}

/// Random distributions and joints for property checks.
pub mod sample {
    use super::*;
    use rand::Rng;

    /// A random distribution over `0..size`; roughly a third of the draws
    /// carry zero weights to exercise disjoint supports.
    pub fn random_dist<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Dist<u64> {
        assert!(size > 0);
        let sparse = rng.random_bool(0.3);
        let mut w: Vec<f64> = (0..size)
            .map(|_| {
                if sparse && rng.random_bool(0.4) {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        if w.iter().all(|&x| x == 0.0) {
            w[rng.random_range(0..size)] = 1.0;
        }
        Dist::normalized((0..size as u64).zip(w)).expect("positive mass")
    }

    /// A random joint over `dims[0] × dims[1] × …`.
    pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Joint {
        let total: usize = dims.iter().product();
        let flat = random_dist(rng, total);
        let names: Vec<String> = (0..dims.len()).map(|i| alloc::format!("V{i}")).collect();
        let rows = flat.iter().map(|(&idx, p)| {
            let mut rem = idx as usize;
            let mut row = alloc::vec![0u64; dims.len()];
            for (slot, &d) in row.iter_mut().zip(dims).rev() {
                *slot = (rem % d) as u64;
                rem /= d;
            }
            (row, p)
        });
        Joint::new(&names, rows).expect("valid random joint")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bin(p0: f64) -> Dist<u64> {
        Dist::new(alloc::vec![0, 1], alloc::vec![p0, 1.0 - p0]).unwrap()
    }

    fn table(a: f64, b: f64, c: f64, d: f64) -> Joint {
        Joint::new(&["X", "Y"], [([0u64, 0], a), ([0, 1], b), ([1, 0], c), ([1, 1], d)]).unwrap()
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_distance(&bin(0.5), &bin(0.5)).unwrap(), 0.0);
        assert_eq!(l1_distance(&bin(1.0), &bin(0.0)).unwrap(), 2.0);
        assert_abs_diff_eq!(l1_distance(&bin(0.75), &bin(0.25)).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hellinger_examples() {
        assert_eq!(hellinger(&bin(0.3), &bin(0.3)).unwrap(), 0.0);
        assert_abs_diff_eq!(hellinger(&bin(1.0), &bin(0.0)).unwrap(), 1.0, epsilon = 1e-15);
        // ½[(1 − √½)² + ½] = 1 − 1/√2
        let expected = math::sqrt(1.0 - core::f64::consts::FRAC_1_SQRT_2);
        assert_abs_diff_eq!(hellinger(&bin(1.0), &bin(0.5)).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 0.54120, epsilon = 1e-5);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let p = Dist::new(alloc::vec![0u64, 1], alloc::vec![0.5, 0.5]).unwrap();
        let q = Dist::new(alloc::vec![0u64, 2], alloc::vec![0.5, 0.5]).unwrap();
        assert_eq!(l1_distance(&p, &q), Err(Error::SampleSpaceMismatch));
        assert_eq!(hellinger(&p, &q), Err(Error::SampleSpaceMismatch));
        let (p2, q2) = Dist::align(&p, &q);
        assert_abs_diff_eq!(l1_distance(&p2, &q2).unwrap(), 1.0);
    }

    #[test]
    fn invalid_distributions() {
        assert!(Dist::new(alloc::vec![0u64, 1], alloc::vec![0.5, 0.6]).is_err());
        assert!(Dist::new(alloc::vec![0u64, 1], alloc::vec![1.5, -0.5]).is_err());
        assert!(Dist::new(alloc::vec![0u64, 0], alloc::vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        // 2 − ¾ log₂ 3
        assert_abs_diff_eq!(
            binary_entropy(0.25).unwrap(),
            2.0 - 0.75 * math::log2(3.0),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(binary_entropy(0.25).unwrap(), 0.81128, epsilon = 1e-5);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        assert_abs_diff_eq!(
            mutual_information(&table(0.25, 0.25, 0.25, 0.25)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            mutual_information(&table(0.5, 0.0, 0.0, 0.5)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let j = table(0.375, 0.125, 0.125, 0.375);
        let expected = 1.0 - binary_entropy(0.25).unwrap();
        assert_abs_diff_eq!(mutual_information(&j).unwrap(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, 0.18872, epsilon = 1e-5);
    }

    #[test]
    fn avg_encoding_examples() {
        let (l, r) = avg_encoding_gap(&table(0.25, 0.25, 0.25, 0.25)).unwrap();
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-15);

        let (l, r) = avg_encoding_gap(&table(0.5, 0.0, 0.0, 0.5)).unwrap();
        assert_abs_diff_eq!(l, 1.0 - core::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(r, KAPPA, epsilon = 1e-15);

        // Given b, A|b = (3/4, 1/4) and A = (1/2, 1/2); both b have weight ½.
        let (l, r) = avg_encoding_gap(&table(0.375, 0.125, 0.125, 0.375)).unwrap();
        let sq = |x: f64| x * x;
        let h2 = 0.5 * (sq(math::sqrt(0.75) - math::sqrt(0.5)) + sq(math::sqrt(0.25) - math::sqrt(0.5)));
        assert_abs_diff_eq!(l, h2, epsilon = 1e-14);
        assert_abs_diff_eq!(l, 0.03407, epsilon = 1e-5);
        assert_abs_diff_eq!(r, 0.06541, epsilon = 1e-5);
    }

    #[test]
    fn conditioning_on_null_event_is_error() {
        let j = table(0.5, 0.0, 0.0, 0.5);
        assert!(j.conditional(&[0], &[0]).is_ok());
        let j = Joint::new(&["X", "Y"], [([0u64, 0], 1.0)]).unwrap();
        assert_eq!(j.conditional(&[0], &[1]), Err(Error::ZeroProbabilityCondition));
    }

    #[test]
    fn conditional_mi_matches_per_value_average() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let j = sample::random_joint(&mut rng, &[3, 2, 3]);
            let direct = conditional_mutual_information(&j).unwrap();
            let z = j.marginal_dist(&[2]).unwrap();
            let avg: f64 = z
                .support()
                .map(|(zv, pz)| pz * mutual_information(&j.conditional(&[2], zv).unwrap()).unwrap())
                .sum();
            assert_abs_diff_eq!(direct, avg, epsilon = 1e-9);
        }
    }

    #[test]
    fn marginal_and_conditional_are_distributions() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let j = sample::random_joint(&mut rng, &[2, 3, 4]);
        let m = j.marginal_dist(&[2, 0]).unwrap();
        assert_abs_diff_eq!(m.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let (row, _) = j.rows().find(|(_, p)| *p > 0.0).unwrap();
        let c = j.conditional(&[1], &[row[1]]).unwrap();
        assert_eq!(c.arity(), 2);
        assert_abs_diff_eq!(c.rows().map(|r| r.1).sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}
