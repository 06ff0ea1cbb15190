//! Finite crystallographic Coxeter systems: Cartan matrices, symmetrizers,
//! and the symmetric / Euler / skew-symmetrized bilinear forms.
//!
//! The form layer is generic over the scalar type through [`Scalar`]; the
//! rest of the crate instantiates it at [`Rat`], since every theorem check
//! downstream is an exact-equality check.

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

use crate::error::Error;
use crate::Result;

/// Scalar type for bilinear-form arithmetic.
pub trait Scalar: Num + Signed + PartialOrd + Clone + FromPrimitive {}
impl<T> Scalar for T where T: Num + Signed + PartialOrd + Clone + FromPrimitive {}

/// Exact rational scalar used throughout the crate.
pub type Rat = Ratio<i64>;

pub fn rat(n: i64) -> Rat {
    Ratio::from_integer(n)
}

fn from_int<S: Scalar>(n: i64) -> S {
    S::from_i64(n).expect("scalar must represent small integers")
}

/// Catalogued finite crystallographic types.
///
/// `B` has its short simple root first, `C` its long simple root first;
/// everything else about the two is transposed. `D` forks at the tail:
/// the last generator attaches to generator `rank - 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    F4,
}

impl CoxeterType {
    pub fn parse(s: &str) -> Result<CoxeterType> {
        let bad = || Error::UnsupportedType(s.to_string());
        let (letter, digits) = s.split_at(1);
        let rank: usize = digits.parse().map_err(|_| bad())?;
        let t = match letter {
            "A" | "a" => CoxeterType::A(rank),
            "B" | "b" => CoxeterType::B(rank),
            "C" | "c" => CoxeterType::C(rank),
            "D" | "d" => CoxeterType::D(rank),
            "G" | "g" if rank == 2 => CoxeterType::G2,
            "F" | "f" if rank == 4 => CoxeterType::F4,
            _ => return Err(bad()),
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(self) -> Result<()> {
        let ok = match self {
            // |Φ⁺| must fit in a 64-bit root set.
            CoxeterType::A(n) => (1..=10).contains(&n),
            CoxeterType::B(n) | CoxeterType::C(n) => (2..=8).contains(&n),
            CoxeterType::D(n) => (4..=8).contains(&n),
            CoxeterType::G2 | CoxeterType::F4 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedType(format!("{self}")))
        }
    }

    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::C(n) | CoxeterType::D(n) => n,
            CoxeterType::G2 => 2,
            CoxeterType::F4 => 4,
        }
    }

    /// Order of the Weyl group, from the classical product formulas.
    pub fn weyl_order(self) -> u64 {
        fn fact(n: usize) -> u64 {
            (1..=n as u64).product()
        }
        match self {
            CoxeterType::A(n) => fact(n + 1),
            CoxeterType::B(n) | CoxeterType::C(n) => (1 << n) * fact(n),
            CoxeterType::D(n) => (1 << (n - 1)) * fact(n),
            CoxeterType::G2 => 12,
            CoxeterType::F4 => 1152,
        }
    }

    /// Number of positive roots, from the classical counts.
    pub fn positive_root_count(self) -> usize {
        match self {
            CoxeterType::A(n) => n * (n + 1) / 2,
            CoxeterType::B(n) | CoxeterType::C(n) => n * n,
            CoxeterType::D(n) => n * (n - 1),
            CoxeterType::G2 => 6,
            CoxeterType::F4 => 24,
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, CoxeterType::A(_) | CoxeterType::D(_))
    }
}

impl std::fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::C(n) => write!(f, "C{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::G2 => write!(f, "G2"),
            CoxeterType::F4 => write!(f, "F4"),
        }
    }
}

/// A word in the simple generators, stored as 0-based generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterWord {
    letters: Vec<u8>,
}

impl CoxeterWord {
    pub fn new(letters: Vec<u8>, rank: usize) -> Result<CoxeterWord> {
        if let Some(&l) = letters.iter().find(|&&l| l as usize >= rank) {
            return Err(Error::NotCoxeterWord(format!(
                "letter {l} out of range for rank {rank}"
            )));
        }
        Ok(CoxeterWord { letters })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// True when the word uses every generator exactly once, i.e. it spells
    /// out a Coxeter element.
    pub fn is_coxeter_element_word(&self, rank: usize) -> bool {
        let mut seen = vec![false; rank];
        for &l in &self.letters {
            if seen[l as usize] {
                return false;
            }
            seen[l as usize] = true;
        }
        self.letters.len() == rank
    }
}

/// A finite crystallographic Coxeter system: integer Cartan matrix,
/// symmetrizer δ normalized so that min δ(s) = 1, and the table of Coxeter
/// orders m(s, t) recovered from the entry products.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct CoxeterSystem<S: Scalar = Rat> {
    type_tag: CoxeterType,
    rank: usize,
    cartan: Vec<i64>,
    delta: Vec<S>,
    orders: Vec<u8>,
}

impl<S: Scalar> CoxeterSystem<S> {
    /// Standard crystallographic system of the given type.
    pub fn build(type_tag: CoxeterType) -> Result<CoxeterSystem<S>> {
        type_tag.validate()?;
        let n = type_tag.rank();
        let mut cartan = vec![0i64; n * n];
        for s in 0..n {
            cartan[s * n + s] = 2;
        }
        let set = |s: usize, t: usize, a_st: i64, a_ts: i64, m: &mut Vec<i64>| {
            m[s * n + t] = a_st;
            m[t * n + s] = a_ts;
        };
        let mut delta_int = vec![1i64; n];
        match type_tag {
            CoxeterType::A(_) => {
                for i in 0..n - 1 {
                    set(i, i + 1, -1, -1, &mut cartan);
                }
            }
            CoxeterType::B(_) => {
                // Short root first: a_{01} = -2, a_{10} = -1.
                set(0, 1, -2, -1, &mut cartan);
                for i in 1..n - 1 {
                    set(i, i + 1, -1, -1, &mut cartan);
                }
                for d in delta_int.iter_mut().skip(1) {
                    *d = 2;
                }
            }
            CoxeterType::C(_) => {
                // Long root first: the transpose of B in the 2x2 corner.
                set(0, 1, -1, -2, &mut cartan);
                for i in 1..n - 1 {
                    set(i, i + 1, -1, -1, &mut cartan);
                }
                delta_int[0] = 2;
            }
            CoxeterType::D(_) => {
                for i in 0..n - 2 {
                    set(i, i + 1, -1, -1, &mut cartan);
                }
                set(n - 3, n - 1, -1, -1, &mut cartan);
            }
            CoxeterType::G2 => {
                set(0, 1, -3, -1, &mut cartan);
                delta_int[1] = 3;
            }
            CoxeterType::F4 => {
                set(0, 1, -1, -1, &mut cartan);
                set(1, 2, -1, -2, &mut cartan);
                set(2, 3, -1, -1, &mut cartan);
                delta_int[0] = 2;
                delta_int[1] = 2;
            }
        }
        let delta: Vec<S> = delta_int.iter().map(|&d| from_int(d)).collect();

        let mut orders = vec![0u8; n * n];
        for s in 0..n {
            for t in 0..n {
                orders[s * n + t] = if s == t {
                    1
                } else {
                    match cartan[s * n + t] * cartan[t * n + s] {
                        0 => 2,
                        1 => 3,
                        2 => 4,
                        3 => 6,
                        p => {
                            return Err(Error::UnsupportedType(format!(
                                "entry product {p} is not of finite type"
                            )))
                        }
                    }
                };
            }
        }

        let sys = CoxeterSystem {
            type_tag,
            rank: n,
            cartan,
            delta,
            orders,
        };
        sys.check_invariants()?;
        Ok(sys)
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.rank;
        for s in 0..n {
            if self.a(s, s) != 2 {
                return Err(Error::Internal("diagonal Cartan entry != 2".into()));
            }
            if self.delta[s].partial_cmp(&S::one()) != Some(std::cmp::Ordering::Greater)
                && self.delta[s] != S::one()
            {
                return Err(Error::Internal("symmetrizer not normalized".into()));
            }
            for t in 0..n {
                if s != t && self.a(s, t) > 0 {
                    return Err(Error::Internal("positive off-diagonal entry".into()));
                }
                if (self.a(s, t) == 0) != (self.a(t, s) == 0) {
                    return Err(Error::Internal("asymmetric zero pattern".into()));
                }
                // δ(s)·a_{st} = δ(t)·a_{ts}
                let lhs = self.delta[s].clone() * from_int::<S>(self.a(s, t));
                let rhs = self.delta[t].clone() * from_int::<S>(self.a(t, s));
                if lhs != rhs {
                    return Err(Error::Internal("Cartan matrix is not symmetrizable".into()));
                }
            }
        }
        Ok(())
    }

    pub fn type_tag(&self) -> CoxeterType {
        self.type_tag
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan entry a_{st}.
    pub fn a(&self, s: usize, t: usize) -> i64 {
        self.cartan[s * self.rank + t]
    }

    /// Coxeter order m(s, t).
    pub fn order(&self, s: usize, t: usize) -> u8 {
        self.orders[s * self.rank + t]
    }

    pub fn delta(&self, s: usize) -> S {
        self.delta[s].clone()
    }

    /// True when generators s and t are joined in the Coxeter diagram.
    pub fn adjacent(&self, s: usize, t: usize) -> bool {
        s != t && self.a(s, t) != 0
    }

    pub fn is_simply_laced(&self) -> bool {
        self.type_tag.is_simply_laced()
    }

    fn check_dim(&self, v: &[S]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Pairing of simple roots: (α_s, α_t) = δ(s)·a_{st}.
    pub fn pair_simple(&self, s: usize, t: usize) -> S {
        self.delta[s].clone() * from_int::<S>(self.a(s, t))
    }

    /// Symmetric bilinear form in simple-root coordinates.
    pub fn symmetric_form(&self, x: &[S], y: &[S]) -> Result<S> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut acc = S::zero();
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                if yt.is_zero() {
                    continue;
                }
                acc = acc + xs.clone() * yt.clone() * self.pair_simple(s, t);
            }
        }
        Ok(acc)
    }

    /// Symmetric form of two integer root-coefficient vectors.
    pub fn symmetric_form_int(&self, x: &[i64], y: &[i64]) -> S {
        let xs: Vec<S> = x.iter().map(|&c| from_int(c)).collect();
        let ys: Vec<S> = y.iter().map(|&c| from_int(c)).collect();
        self.symmetric_form(&xs, &ys)
            .expect("integer vectors have full rank length")
    }

    fn coxeter_positions(&self, c: &CoxeterWord) -> Result<Vec<usize>> {
        if !c.is_coxeter_element_word(self.rank) {
            return Err(Error::NotCoxeterWord(format!("{:?}", c.letters())));
        }
        let mut pos = vec![0usize; self.rank];
        for (i, &l) in c.letters().iter().enumerate() {
            pos[l as usize] = i;
        }
        Ok(pos)
    }

    /// Euler form entry on simple roots for the Coxeter word `c`:
    /// the symmetric pairing when s comes after t in c, δ(s) on the diagonal,
    /// zero when s comes before t. Its symmetrization is the symmetric form.
    fn euler_entry(&self, pos: &[usize], s: usize, t: usize) -> S {
        use std::cmp::Ordering::*;
        match pos[s].cmp(&pos[t]) {
            Equal => self.delta[s].clone(),
            Greater => self.pair_simple(s, t),
            Less => S::zero(),
        }
    }

    /// Euler form ⟨x, y⟩_c, extended bilinearly.
    pub fn euler_form(&self, c: &CoxeterWord, x: &[S], y: &[S]) -> Result<S> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let pos = self.coxeter_positions(c)?;
        let mut acc = S::zero();
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                if yt.is_zero() {
                    continue;
                }
                acc = acc + xs.clone() * yt.clone() * self.euler_entry(&pos, s, t);
            }
        }
        Ok(acc)
    }

    /// Skew-symmetrized Euler form [x | y]_c = ⟨x,y⟩_c − ⟨y,x⟩_c.
    pub fn skew_form(&self, c: &CoxeterWord, x: &[S], y: &[S]) -> Result<S> {
        Ok(self.euler_form(c, x, y)? - self.euler_form(c, y, x)?)
    }

    /// Skew form of integer root-coefficient vectors.
    pub fn skew_form_int(&self, c: &CoxeterWord, x: &[i64], y: &[i64]) -> Result<S> {
        let xs: Vec<S> = x.iter().map(|&c| from_int(c)).collect();
        let ys: Vec<S> = y.iter().map(|&c| from_int(c)).collect();
        self.skew_form(c, &xs, &ys)
    }
}

/// Standard system of the given type over exact rationals.
pub fn build_system(type_tag: CoxeterType) -> Result<CoxeterSystem> {
    CoxeterSystem::<Rat>::build(type_tag)
}

/// Catalog of systems exercised by the verification suites.
pub fn catalog() -> Vec<CoxeterType> {
    vec![
        CoxeterType::A(1),
        CoxeterType::A(2),
        CoxeterType::A(3),
        CoxeterType::A(4),
        CoxeterType::A(5),
        CoxeterType::B(2),
        CoxeterType::B(3),
        CoxeterType::B(4),
        CoxeterType::C(2),
        CoxeterType::C(3),
        CoxeterType::D(4),
        CoxeterType::D(5),
        CoxeterType::G2,
        CoxeterType::F4,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sys(t: CoxeterType) -> CoxeterSystem {
        crate::cartan::build_system(t).unwrap()
    }

    #[test]
    fn a2_matrix() {
        let s = sys(CoxeterType::A(2));
        assert_eq!(s.a(0, 0), 2);
        assert_eq!(s.a(0, 1), -1);
        assert_eq!(s.a(1, 0), -1);
        assert_eq!(s.order(0, 1), 3);
        assert_eq!(s.delta(0), rat(1));
    }

    #[test]
    fn b2_matrix() {
        let s = sys(CoxeterType::B(2));
        assert_eq!(s.a(0, 1) * s.a(1, 0), 2);
        assert_eq!(s.order(0, 1), 4);
        // Short root first: δ = (1, 2), so (α_0, α_0) = 2δ(0).
        assert_eq!(s.delta(0), rat(1));
        assert_eq!(s.delta(1), rat(2));
        assert_eq!(s.pair_simple(0, 0), rat(2) * s.delta(0));
    }

    #[test]
    fn g2_matrix() {
        let s = sys(CoxeterType::G2);
        assert_eq!(s.a(0, 1) * s.a(1, 0), 3);
        assert_eq!(s.order(0, 1), 6);
    }

    #[test]
    fn parse_tags() {
        assert_eq!(CoxeterType::parse("A3").unwrap(), CoxeterType::A(3));
        assert_eq!(CoxeterType::parse("b2").unwrap(), CoxeterType::B(2));
        assert_eq!(CoxeterType::parse("G2").unwrap(), CoxeterType::G2);
        assert!(CoxeterType::parse("D3").is_err());
        assert!(CoxeterType::parse("H3").is_err());
        assert!(CoxeterType::parse("G3").is_err());
    }

    #[test]
    fn orders_table_symmetric() {
        for t in catalog() {
            let s = sys(t);
            for i in 0..s.rank() {
                assert_eq!(s.order(i, i), 1);
                for j in 0..s.rank() {
                    assert_eq!(s.order(i, j), s.order(j, i), "{t}");
                }
            }
        }
    }

    #[test]
    fn symmetric_form_examples() {
        let a2 = sys(CoxeterType::A(2));
        let e0 = vec![rat(1), rat(0)];
        let e1 = vec![rat(0), rat(1)];
        assert_eq!(a2.symmetric_form(&e0, &e1).unwrap(), rat(-1));
        assert!(a2.symmetric_form(&e0, &[rat(1)]).is_err());
    }

    #[test]
    fn form_symmetry_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for t in catalog() {
            let s = sys(t);
            for _ in 0..20 {
                let x: Vec<Rat> = (0..s.rank())
                    .map(|_| Rat::new(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4)))
                    .collect();
                let y: Vec<Rat> = (0..s.rank())
                    .map(|_| Rat::new(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4)))
                    .collect();
                assert_eq!(
                    s.symmetric_form(&x, &y).unwrap(),
                    s.symmetric_form(&y, &x).unwrap()
                );
            }
        }
    }

    #[test]
    fn euler_form_a2() {
        let a2 = sys(CoxeterType::A(2));
        let c = CoxeterWord::new(vec![0, 1], 2).unwrap();
        let e0 = vec![rat(1), rat(0)];
        let e1 = vec![rat(0), rat(1)];
        assert_eq!(a2.euler_form(&c, &e1, &e0).unwrap(), rat(-1));
        assert_eq!(a2.euler_form(&c, &e0, &e1).unwrap(), rat(0));
        assert!(a2
            .euler_form(&CoxeterWord::new(vec![0, 0], 2).unwrap(), &e0, &e1)
            .is_err());
    }

    #[test]
    fn euler_symmetrisation_and_skew() {
        let mut rng = StdRng::seed_from_u64(11);
        for t in catalog() {
            let s = sys(t);
            let c = CoxeterWord::new((0..s.rank() as u8).collect(), s.rank()).unwrap();
            // basis pairs
            for i in 0..s.rank() {
                for j in 0..s.rank() {
                    let mut x = vec![rat(0); s.rank()];
                    let mut y = vec![rat(0); s.rank()];
                    x[i] = rat(1);
                    y[j] = rat(1);
                    let sym = s.euler_form(&c, &x, &y).unwrap() + s.euler_form(&c, &y, &x).unwrap();
                    assert_eq!(sym, s.symmetric_form(&x, &y).unwrap(), "{t} basis {i},{j}");
                }
            }
            // random rational vectors
            for _ in 0..100 {
                let x: Vec<Rat> = (0..s.rank())
                    .map(|_| Rat::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5)))
                    .collect();
                let y: Vec<Rat> = (0..s.rank())
                    .map(|_| Rat::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5)))
                    .collect();
                let sym = s.euler_form(&c, &x, &y).unwrap() + s.euler_form(&c, &y, &x).unwrap();
                assert_eq!(sym, s.symmetric_form(&x, &y).unwrap(), "{t}");
                assert_eq!(s.skew_form(&c, &x, &x).unwrap(), rat(0), "{t}");
                assert_eq!(
                    s.skew_form(&c, &x, &y).unwrap(),
                    -s.skew_form(&c, &y, &x).unwrap(),
                    "{t}"
                );
            }
        }
    }
}
