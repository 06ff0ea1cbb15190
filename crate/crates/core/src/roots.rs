//! Finite root systems in simple-root integer coordinates: generation by
//! reflection closure, the catalog of maximal rank-two subsystems obtained
//! by 2-dimensional span grouping, and their skew-form total orders.

use std::collections::HashMap;

use crate::cartan::{CoxeterSystem, CoxeterType, CoxeterWord, Scalar};
use crate::error::Error;
use crate::{PosIdx, Result, SubsysId};

/// A maximal rank-two root subsystem: all positive roots lying in one
/// 2-dimensional span. Commutative iff it consists of two orthogonal roots.
#[derive(Debug, Clone)]
pub struct RankTwoSubsystem {
    pub id: SubsysId,
    /// Positive roots of the subsystem, ascending by index (unordered at rest).
    pub roots: Vec<PosIdx>,
    pub commutative: bool,
    /// Position in the list of non-commutative subsystems, if applicable.
    pub noncomm_idx: Option<u32>,
}

/// The positive roots of a finite crystallographic root system together with
/// the simple-reflection action and the rank-two subsystem catalog.
///
/// Roots are indexed by `PosIdx` in (height, lexicographic) order, which makes
/// every downstream enumeration and export reproducible.
#[derive(Debug, Clone)]
pub struct RootSystem {
    type_tag: CoxeterType,
    rank: usize,
    positives: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, PosIdx>,
    simples: Vec<PosIdx>,
    /// refl[s][b] = index of s(β_b); the image is negative iff β_b = α_s.
    refl: Vec<Vec<PosIdx>>,
    subsystems: Vec<RankTwoSubsystem>,
    /// pair_sub[i * n + j] = id of the unique subsystem containing roots i ≠ j.
    pair_sub: Vec<SubsysId>,
    noncomm: Vec<SubsysId>,
    /// Triples (i, j, k) with β_k = λβ_i + μβ_j for some λ, μ > 0.
    cone_triples: Vec<(PosIdx, PosIdx, PosIdx)>,
}

fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Row-reduced canonical basis of the rational span of two independent
/// integer vectors; `None` when they are proportional.
fn span_key(u: &[i64], v: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
    let n = u.len();
    let mut a: Vec<(i64, i64)> = u.iter().map(|&x| (x, 1)).collect(); // (num, den)
    let mut b: Vec<(i64, i64)> = v.iter().map(|&x| (x, 1)).collect();

    fn gcd(a: i64, b: i64) -> i64 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    fn norm(x: (i64, i64)) -> (i64, i64) {
        if x.0 == 0 {
            return (0, 1);
        }
        let g = gcd(x.0, x.1);
        let sgn = if x.1 < 0 { -1 } else { 1 };
        (sgn * x.0 / g, sgn * x.1 / g)
    }
    fn sub_mul(row: &mut [(i64, i64)], other: &[(i64, i64)], f: (i64, i64)) {
        for (x, o) in row.iter_mut().zip(other) {
            // x -= f * o
            let num = x.0 * f.1 * o.1 - f.0 * o.0 * x.1;
            let den = x.1 * f.1 * o.1;
            *x = norm((num, den));
        }
    }
    fn scale_to_unit(row: &mut [(i64, i64)], p: usize) {
        let lead = row[p];
        for x in row.iter_mut() {
            *x = norm((x.0 * lead.1, x.1 * lead.0));
        }
    }

    let p1 = a.iter().position(|x| x.0 != 0)?;
    scale_to_unit(&mut a, p1);
    let f = b[p1];
    sub_mul(&mut b, &a, f);
    let p2 = b.iter().position(|x| x.0 != 0)?;
    scale_to_unit(&mut b, p2);
    let f = a[p2];
    sub_mul(&mut a, &b, f);

    // Clear denominators and make primitive.
    let to_primitive = |row: &[(i64, i64)]| {
        let lcm = row.iter().fold(1i64, |l, &(_, d)| l / gcd(l, d) * d);
        let ints: Vec<i64> = row.iter().map(|&(n, d)| n * (lcm / d)).collect();
        let g = ints.iter().fold(0i64, |g, &x| gcd(g, x)).max(1);
        ints.iter().map(|&x| x / g).collect::<Vec<i64>>()
    };
    let mut rows = [to_primitive(&a), to_primitive(&b)];
    if n >= 2 {
        rows.sort();
    }
    Some((rows[0].clone(), rows[1].clone()))
}

impl RootSystem {
    /// Closure of the simple roots under the reflections
    /// s(γ) = γ − ⟨γ, α_s^∨⟩ α_s, with the coroot pairing read off the
    /// Cartan matrix. Diverging closures (bad input matrices) are caught by
    /// a size guard.
    pub fn generate<S: Scalar>(sys: &CoxeterSystem<S>) -> Result<RootSystem> {
        let n = sys.rank();
        let guard = 2 * n * n * 10;
        let mut set: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for s in 0..n {
            let mut v = vec![0i64; n];
            v[s] = 1;
            set.insert(v.clone(), ());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for s in 0..n {
                let pairing: i64 = (0..n).map(|t| sys.a(s, t) * v[t]).sum();
                let mut img = v.clone();
                img[s] -= pairing;
                if img.iter().all(|&c| c >= 0) && img.iter().any(|&c| c > 0) {
                    if !set.contains_key(&img) {
                        if set.len() >= guard {
                            return Err(Error::RootClosureDiverged);
                        }
                        set.insert(img.clone(), ());
                        queue.push(img);
                    }
                } else if !img.iter().all(|&c| c <= 0) {
                    return Err(Error::Internal(
                        "reflection produced a mixed-sign vector".into(),
                    ));
                }
            }
        }

        let mut positives: Vec<Vec<i64>> = set.into_keys().collect();
        positives.sort_by(|a, b| (height(a), a).cmp(&(height(b), b)));
        let expected = sys.type_tag().positive_root_count();
        if positives.len() != expected {
            return Err(Error::Internal(format!(
                "closure found {} positive roots, expected {}",
                positives.len(),
                expected
            )));
        }
        let index: HashMap<Vec<i64>, PosIdx> = positives
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as PosIdx))
            .collect();
        let simples: Vec<PosIdx> = (0..n)
            .map(|s| {
                let mut v = vec![0i64; n];
                v[s] = 1;
                index[&v]
            })
            .collect();

        let mut refl = vec![vec![0 as PosIdx; positives.len()]; n];
        for s in 0..n {
            for (b, v) in positives.iter().enumerate() {
                let pairing: i64 = (0..n).map(|t| sys.a(s, t) * v[t]).sum();
                let mut img = v.clone();
                img[s] -= pairing;
                if b as PosIdx == simples[s] {
                    refl[s][b] = simples[s]; // s(α_s) = −α_s
                } else {
                    refl[s][b] = *index.get(&img).ok_or_else(|| {
                        Error::Internal("reflection image is not a positive root".into())
                    })?;
                }
            }
        }

        let mut rs = RootSystem {
            type_tag: sys.type_tag(),
            rank: n,
            positives,
            index,
            simples,
            refl,
            subsystems: Vec::new(),
            pair_sub: Vec::new(),
            noncomm: Vec::new(),
            cone_triples: Vec::new(),
        };
        rs.build_subsystems(sys)?;
        rs.build_cone_triples(sys)?;
        Ok(rs)
    }

    fn build_subsystems<S: Scalar>(&mut self, sys: &CoxeterSystem<S>) -> Result<()> {
        let m = self.positives.len();
        let mut groups: HashMap<(Vec<i64>, Vec<i64>), Vec<PosIdx>> = HashMap::new();
        for i in 0..m {
            for j in i + 1..m {
                let key = span_key(&self.positives[i], &self.positives[j]).ok_or_else(|| {
                    Error::Internal("proportional positive roots in reduced system".into())
                })?;
                let g = groups.entry(key).or_default();
                for r in [i as PosIdx, j as PosIdx] {
                    if !g.contains(&r) {
                        g.push(r);
                    }
                }
            }
        }
        let mut root_sets: Vec<Vec<PosIdx>> = groups
            .into_values()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        root_sets.sort();

        if root_sets.len() > 128 {
            return Err(Error::GuardExceeded(format!(
                "{} rank-two subsystems exceed the 128-bit key budget",
                root_sets.len()
            )));
        }

        let mut pair_sub = vec![u32::MAX; m * m];
        let mut subsystems = Vec::new();
        let mut noncomm = Vec::new();
        for (id, roots) in root_sets.into_iter().enumerate() {
            let id = id as SubsysId;
            for (a, &i) in roots.iter().enumerate() {
                for &j in roots.iter().skip(a + 1) {
                    let (i, j) = (i as usize, j as usize);
                    if pair_sub[i * m + j] != u32::MAX {
                        return Err(Error::Internal(
                            "pair of roots in two distinct subsystems".into(),
                        ));
                    }
                    pair_sub[i * m + j] = id;
                    pair_sub[j * m + i] = id;
                }
            }
            let commutative = roots.len() == 2;
            if commutative {
                let f = sys.symmetric_form_int(
                    &self.positives[roots[0] as usize],
                    &self.positives[roots[1] as usize],
                );
                if !f.is_zero() {
                    return Err(Error::Internal(
                        "two-root subsystem with non-orthogonal roots".into(),
                    ));
                }
            }
            let noncomm_idx = if commutative {
                None
            } else {
                noncomm.push(id);
                Some((noncomm.len() - 1) as u32)
            };
            subsystems.push(RankTwoSubsystem {
                id,
                roots,
                commutative,
                noncomm_idx,
            });
        }
        if pair_sub.iter().enumerate().any(|(k, &v)| {
            let (i, j) = (k / m, k % m);
            i != j && v == u32::MAX
        }) {
            return Err(Error::Internal(
                "root pair not covered by a subsystem".into(),
            ));
        }

        // Each subsystem is closed under the reflections of its own roots.
        for sub in &subsystems {
            for &b in &sub.roots {
                let beta = &self.positives[b as usize];
                let bb = sys.symmetric_form_int(beta, beta);
                for &g in &sub.roots {
                    let gamma = &self.positives[g as usize];
                    let coeff =
                        sys.symmetric_form_int(beta, gamma) * S::from_i64(2).unwrap() / bb.clone();
                    // image = γ − coeff·β, check it is ±(some member)
                    let member = sub.roots.iter().any(|&r| {
                        let rho = &self.positives[r as usize];
                        let plus = (0..self.rank).all(|t| {
                            S::from_i64(gamma[t]).unwrap()
                                - coeff.clone() * S::from_i64(beta[t]).unwrap()
                                == S::from_i64(rho[t]).unwrap()
                        });
                        let minus = (0..self.rank).all(|t| {
                            S::from_i64(gamma[t]).unwrap()
                                - coeff.clone() * S::from_i64(beta[t]).unwrap()
                                == S::from_i64(-rho[t]).unwrap()
                        });
                        plus || minus
                    });
                    if !member {
                        return Err(Error::Internal(
                            "subsystem not closed under its reflections".into(),
                        ));
                    }
                }
            }
        }

        self.subsystems = subsystems;
        self.pair_sub = pair_sub;
        self.noncomm = noncomm;
        Ok(())
    }

    /// Triples (i, j, k) with β_k strictly inside the positive cone of
    /// β_i and β_j; these drive the biclosed and admissibility checks.
    fn build_cone_triples<S: Scalar>(&mut self, _sys: &CoxeterSystem<S>) -> Result<()> {
        let mut triples = Vec::new();
        for sub in &self.subsystems {
            if sub.roots.len() < 3 {
                continue;
            }
            for (a, &i) in sub.roots.iter().enumerate() {
                for &j in sub.roots.iter().skip(a + 1) {
                    for &k in &sub.roots {
                        if k == i || k == j {
                            continue;
                        }
                        if let Some((lam, mu)) = self.solve_combination(i, j, k) {
                            if lam > (0, 1) && mu > (0, 1) {
                                triples.push((i, j, k));
                            }
                        }
                    }
                }
            }
        }
        triples.sort_unstable();
        self.cone_triples = triples;
        Ok(())
    }

    /// Solve β_k = λβ_i + μβ_j exactly; returns (λ, μ) as normalized
    /// fractions when solvable.
    fn solve_combination(
        &self,
        i: PosIdx,
        j: PosIdx,
        k: PosIdx,
    ) -> Option<((i64, i64), (i64, i64))> {
        let (u, v, w) = (
            &self.positives[i as usize],
            &self.positives[j as usize],
            &self.positives[k as usize],
        );
        let n = self.rank;
        // Find two rows with nonzero determinant.
        for r1 in 0..n {
            for r2 in r1 + 1..n {
                let det = u[r1] * v[r2] - u[r2] * v[r1];
                if det == 0 {
                    continue;
                }
                // Cramer
                let lam_num = w[r1] * v[r2] - w[r2] * v[r1];
                let mu_num = u[r1] * w[r2] - u[r2] * w[r1];
                let frac = |num: i64, den: i64| {
                    let g = {
                        let (mut a, mut b) = (num.abs().max(1), den.abs());
                        while b != 0 {
                            (a, b) = (b, a % b);
                        }
                        a
                    };
                    let s = if den < 0 { -1 } else { 1 };
                    (s * num / g, s * den / g)
                };
                let lam = frac(lam_num, det);
                let mu = frac(mu_num, det);
                // Verify on all coordinates.
                let ok = (0..n)
                    .all(|t| lam.0 * u[t] * mu.1 + mu.0 * v[t] * lam.1 == w[t] * lam.1 * mu.1);
                return if ok { Some((lam, mu)) } else { None };
            }
        }
        None
    }

    pub fn type_tag(&self) -> CoxeterType {
        self.type_tag
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn count(&self) -> usize {
        self.positives.len()
    }

    pub fn coeffs(&self, b: PosIdx) -> &[i64] {
        &self.positives[b as usize]
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<PosIdx> {
        self.index.get(coeffs).copied()
    }

    /// Index of the simple root α_s.
    pub fn simple(&self, s: usize) -> PosIdx {
        self.simples[s]
    }

    /// Applies the simple reflection s; the boolean is true when the image is
    /// negative, which happens exactly for β = α_s.
    pub fn reflect(&self, s: usize, b: PosIdx) -> (PosIdx, bool) {
        (self.refl[s][b as usize], b == self.simples[s])
    }

    pub fn subsystems(&self) -> &[RankTwoSubsystem] {
        &self.subsystems
    }

    pub fn subsystem_of_pair(&self, i: PosIdx, j: PosIdx) -> SubsysId {
        self.pair_sub[i as usize * self.positives.len() + j as usize]
    }

    /// Ids of the non-commutative subsystems, ascending.
    pub fn noncommutative(&self) -> &[SubsysId] {
        &self.noncomm
    }

    pub fn cone_triples(&self) -> &[(PosIdx, PosIdx, PosIdx)] {
        &self.cone_triples
    }

    /// Total order β_1, ..., β_m on the positive roots of a non-commutative
    /// subsystem such that the skew form [β_i | β_j]_c is positive for i < j.
    /// The interior roots are positive combinations of the two ends.
    pub fn order_subsystem<S: Scalar>(
        &self,
        sys: &CoxeterSystem<S>,
        c: &CoxeterWord,
        sub: SubsysId,
    ) -> Result<Vec<PosIdx>> {
        let subsystem = &self.subsystems[sub as usize];
        if subsystem.commutative {
            return Err(Error::CommutativeSubsystem(sub));
        }
        let roots = &subsystem.roots;
        let mut scored: Vec<(usize, PosIdx)> = Vec::with_capacity(roots.len());
        for &b in roots {
            let mut score = 0usize;
            for &g in roots {
                if g == b {
                    continue;
                }
                let skew = sys.skew_form_int(c, self.coeffs(b), self.coeffs(g))?;
                if skew.is_positive() {
                    score += 1;
                }
            }
            scored.push((score, b));
        }
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let order: Vec<PosIdx> = scored.iter().map(|&(_, b)| b).collect();
        // Verify strict positivity along the order.
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                let skew = sys.skew_form_int(c, self.coeffs(order[i]), self.coeffs(order[j]))?;
                if !skew.is_positive() {
                    return Err(Error::Internal(format!(
                        "skew form does not totally order subsystem {sub}"
                    )));
                }
            }
        }
        // The two ends must be the subsystem's simple roots: every interior
        // root is a strictly positive combination of them.
        let (first, last) = (order[0], order[order.len() - 1]);
        for &b in order.iter().take(order.len() - 1).skip(1) {
            match self.solve_combination(first, last, b) {
                Some((lam, mu)) if lam > (0, 1) && mu > (0, 1) => {}
                _ => {
                    return Err(Error::Internal(format!(
                        "interior root of subsystem {sub} is not inside the end cone"
                    )))
                }
            }
        }
        Ok(order)
    }

    /// The c-order of every non-commutative subsystem, indexed by
    /// non-commutative position.
    pub fn reference_orders<S: Scalar>(
        &self,
        sys: &CoxeterSystem<S>,
        c: &CoxeterWord,
    ) -> Result<Vec<Vec<PosIdx>>> {
        self.noncomm
            .iter()
            .map(|&id| self.order_subsystem(sys, c, id))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::catalog;

    fn rs(t: CoxeterType) -> (CoxeterSystem, RootSystem) {
        let sys = crate::cartan::build_system(t).unwrap();
        let rs = RootSystem::generate(&sys).unwrap();
        (sys, rs)
    }

    #[test]
    fn counts_match_closed_forms() {
        for t in catalog() {
            let (_, r) = rs(t);
            assert_eq!(r.count(), t.positive_root_count(), "{t}");
        }
    }

    #[test]
    fn a2_roots() {
        let (_, r) = rs(CoxeterType::A(2));
        assert_eq!(r.count(), 3);
        assert!(r.root_index(&[1, 1]).is_some());
        // s_0(α_1) = α_0 + α_1
        let a1 = r.simple(1);
        let (img, neg) = r.reflect(0, a1);
        assert!(!neg);
        assert_eq!(r.coeffs(img), &[1, 1]);
        // s(α_s) = −α_s
        let (img, neg) = r.reflect(0, r.simple(0));
        assert!(neg);
        assert_eq!(img, r.simple(0));
    }

    #[test]
    fn b2_reflection_stays_positive() {
        let (_, r) = rs(CoxeterType::B(2));
        let sum = r.root_index(&[1, 1]).unwrap();
        let (_, neg) = r.reflect(0, sum);
        assert!(!neg);
        let (_, neg) = r.reflect(1, sum);
        assert!(!neg);
    }

    #[test]
    fn reflect_is_involution() {
        for t in catalog() {
            let (_, r) = rs(t);
            for s in 0..r.rank() {
                for b in 0..r.count() as PosIdx {
                    let (img, _) = r.reflect(s, b);
                    let (back, _) = r.reflect(s, img);
                    assert_eq!(back, b, "{t}");
                }
            }
        }
    }

    #[test]
    fn subsystem_catalog_a2_a3_b2_g2() {
        let (_, r) = rs(CoxeterType::A(2));
        assert_eq!(r.subsystems().len(), 1);
        assert!(!r.subsystems()[0].commutative);
        assert_eq!(r.subsystems()[0].roots.len(), 3);

        let (_, r) = rs(CoxeterType::A(3));
        let comm = r.subsystems().iter().filter(|s| s.commutative).count();
        let noncomm = r.subsystems().len() - comm;
        assert_eq!((noncomm, comm), (4, 3));
        for sub in r.subsystems().iter().filter(|s| !s.commutative) {
            assert_eq!(sub.roots.len(), 3);
        }

        // B2 is a single 4-root subsystem; its internal A1×A1 pairs are not
        // separate subsystems.
        let (_, r) = rs(CoxeterType::B(2));
        assert_eq!(r.subsystems().len(), 1);
        assert_eq!(r.subsystems()[0].roots.len(), 4);

        let (_, r) = rs(CoxeterType::G2);
        assert_eq!(r.subsystems().len(), 1);
        assert_eq!(r.subsystems()[0].roots.len(), 6);
    }

    #[test]
    fn every_pair_in_exactly_one_subsystem() {
        for t in catalog() {
            let (_, r) = rs(t);
            for i in 0..r.count() as PosIdx {
                for j in 0..r.count() as PosIdx {
                    if i == j {
                        continue;
                    }
                    let hits = r
                        .subsystems()
                        .iter()
                        .filter(|s| s.roots.contains(&i) && s.roots.contains(&j))
                        .count();
                    assert_eq!(hits, 1, "{t}: pair ({i},{j})");
                    assert_eq!(
                        r.subsystem_of_pair(i, j),
                        r.subsystems()
                            .iter()
                            .find(|s| s.roots.contains(&i) && s.roots.contains(&j))
                            .unwrap()
                            .id
                    );
                }
            }
        }
    }

    #[test]
    fn order_subsystem_a2() {
        let (sys, r) = rs(CoxeterType::A(2));
        let c = CoxeterWord::new(vec![0, 1], 2).unwrap();
        let order = r.order_subsystem(&sys, &c, 0).unwrap();
        let coeffs: Vec<&[i64]> = order.iter().map(|&b| r.coeffs(b)).collect();
        assert_eq!(coeffs, vec![&[1, 0][..], &[1, 1][..], &[0, 1][..]]);

        let c_rev = CoxeterWord::new(vec![1, 0], 2).unwrap();
        let rev = r.order_subsystem(&sys, &c_rev, 0).unwrap();
        assert_eq!(rev, order.iter().rev().copied().collect::<Vec<_>>());
    }

    #[test]
    fn order_subsystem_b2_ends_are_simple() {
        let (sys, r) = rs(CoxeterType::B(2));
        let c = CoxeterWord::new(vec![0, 1], 2).unwrap();
        let order = r.order_subsystem(&sys, &c, 0).unwrap();
        assert_eq!(order.len(), 4);
        let ends = [order[0], order[3]];
        assert!(ends.contains(&r.simple(0)) && ends.contains(&r.simple(1)));
    }

    #[test]
    fn commutative_subsystem_has_no_order() {
        let (sys, r) = rs(CoxeterType::A(3));
        let c = CoxeterWord::new(vec![0, 1, 2], 3).unwrap();
        let comm = r.subsystems().iter().find(|s| s.commutative).unwrap();
        assert!(matches!(
            r.order_subsystem(&sys, &c, comm.id),
            Err(Error::CommutativeSubsystem(_))
        ));
    }
}
