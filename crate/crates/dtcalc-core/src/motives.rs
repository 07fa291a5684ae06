//! Motive realizations: rational functions in the Lefschetz class `L`
//! (resp. its square root `q`), and formal sums of strata classes.
//!
//! A stratum class records just enough of a locally closed stratum to
//! realize it: for torus quotients the partition of the coordinates into
//! zero / nonzero / free, for table stacks a declared point motive.

use crate::exactq::{rat, Rat, Subspace};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MotiveError {
    /// The Euler characteristic specialization hit a pole at `L = 1`.
    #[error("rational function has a pole at L = 1")]
    PoleAtOne,
    /// The monodromic specialization hit a pole at `q = -1`.
    #[error("rational function has a pole at q = -1")]
    PoleAtMinusOne,
}

/// Dense univariate polynomial over `Q`, coefficients in ascending degree,
/// trailing zeros trimmed (so the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(coeffs: Vec<Rat>) -> Poly {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Rat::one()])
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Poly {
        Poly(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut c = vec![Rat::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in other.0.iter().enumerate() {
            c[i] += x;
        }
        Poly::new(c)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                let add = a * b;
                c[i + j] += add;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        let dlead = d.0.last().unwrap().clone();
        while !r.is_zero() && r.0.len() >= d.0.len() {
            let shift = r.0.len() - d.0.len();
            let c = r.0.last().unwrap() / &dlead;
            q[shift] = c.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(d.0.iter().map(|x| x * &c));
            r = r.sub(&Poly::new(sub));
        }
        (Poly::new(q), r)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.0.last().unwrap().clone();
        a.scale(&lead.recip())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }
}

/// A reduced rational function in one variable: gcd(num, den) = 1 and the
/// denominator is monic, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> RationalFn {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = RationalFn { num, den };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        self.num = self.num.div_rem(&g).0;
        self.den = self.den.div_rem(&g).0;
        let lead = self.den.0.last().unwrap().clone();
        self.num = self.num.scale(&lead.recip());
        self.den = self.den.scale(&lead.recip());
    }

    pub fn zero() -> RationalFn {
        RationalFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RationalFn {
        RationalFn { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(c: Rat) -> RationalFn {
        RationalFn { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> RationalFn {
        RationalFn { num: p, den: Poly::one() }
    }

    /// The variable (`L` or `q` depending on context).
    pub fn var() -> RationalFn {
        RationalFn::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, s: &Rat) -> RationalFn {
        RationalFn::new(self.num.scale(s), self.den.clone())
    }

    pub fn div(&self, other: &RationalFn) -> RationalFn {
        assert!(!other.is_zero(), "division by zero rational function");
        RationalFn::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, k: i64) -> RationalFn {
        let base = if k < 0 { RationalFn::one().div(self) } else { self.clone() };
        let mut acc = RationalFn::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Substitute the variable by a polynomial (used for `L = q^2`).
    pub fn substitute(&self, inner: &Poly) -> RationalFn {
        RationalFn::new(self.num.compose(inner), self.den.compose(inner))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Poly| -> String {
            if p.is_zero() {
                return "0".into();
            }
            let mut terms = Vec::new();
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let m = match i {
                    0 => String::new(),
                    1 => "L".into(),
                    _ => format!("L^{i}"),
                };
                let t = if m.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    m
                } else if (-c).is_one() {
                    format!("-{m}")
                } else {
                    format!("{c}*{m}")
                };
                terms.push(t);
            }
            let mut s = String::new();
            for (i, t) in terms.iter().enumerate() {
                if i > 0 && !t.starts_with('-') {
                    s.push('+');
                }
                s.push_str(t);
            }
            s
        };
        if self.den == Poly::one() {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "({})/({})", show(&self.num), show(&self.den))
        }
    }
}

/// `true` iff the reduced function has no pole at `L = 1`.
pub fn is_regular_at_one(f: &RationalFn) -> bool {
    !f.den.eval(&Rat::one()).is_zero()
}

/// Evaluation at `L = 1` (Euler characteristic specialization).
pub fn euler_char(f: &RationalFn) -> Result<Rat, MotiveError> {
    f.eval(&Rat::one()).ok_or(MotiveError::PoleAtOne)
}

/// Evaluation at `q = -1` (monodromic Euler characteristic; the input is a
/// rational function in `q`).
pub fn euler_char_mon(f: &RationalFn) -> Result<Rat, MotiveError> {
    f.eval(&rat(-1)).ok_or(MotiveError::PoleAtMinusOne)
}

/// What a stratum class remembers for realization purposes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratumKind {
    /// A locally closed coordinate stratum of a linear torus quotient:
    /// the listed coordinates are pinned to zero, pinned nonzero, or free,
    /// and the quotient is by a torus of the given rank.
    Torus {
        torus_rank: usize,
        zero: Vec<usize>,
        nonzero: Vec<usize>,
        free: Vec<usize>,
    },
    /// A declared stratum of a table stack with an explicitly given point
    /// motive.
    Table { label: String, point_motive: RationalFn },
}

/// A stratum class: a face tag recording which graded piece the stratum
/// lives on, plus realization data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumClass {
    pub face: Subspace,
    pub kind: StratumKind,
}

impl StratumClass {
    /// Class of the stratum as a rational function in `L`.
    pub fn point_motive(&self) -> RationalFn {
        match &self.kind {
            StratumKind::Torus { torus_rank, zero: _, nonzero, free } => {
                let l = Poly::var();
                let lm1 = l.sub(&Poly::one());
                let num = l.pow(free.len()).mul(&lm1.pow(nonzero.len()));
                RationalFn::new(num, lm1.pow(*torus_rank))
            }
            StratumKind::Table { point_motive, .. } => point_motive.clone(),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            StratumKind::Torus { zero, nonzero, free, .. } => {
                let fmt_set = |s: &[usize]| {
                    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
                };
                format!("z[{}] nz[{}] f[{}]", fmt_set(zero), fmt_set(nonzero), fmt_set(free))
            }
            StratumKind::Table { label, .. } => label.clone(),
        }
    }
}

/// A finite Q-linear combination of stratum classes; zero coefficients are
/// never stored, so structural equality is equality of the formal sums.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StrataMotive(BTreeMap<StratumClass, Rat>);

impl StrataMotive {
    pub fn zero() -> StrataMotive {
        StrataMotive(BTreeMap::new())
    }

    pub fn class(c: StratumClass) -> StrataMotive {
        let mut m = StrataMotive::zero();
        m.add_class(c, Rat::one());
        m
    }

    pub fn add_class(&mut self, c: StratumClass, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let e = self.0.entry(c);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &StrataMotive) -> StrataMotive {
        let mut out = self.clone();
        for (c, x) in &other.0 {
            out.add_class(c.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &StrataMotive) -> StrataMotive {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, s: &Rat) -> StrataMotive {
        if s.is_zero() {
            return StrataMotive::zero();
        }
        StrataMotive(self.0.iter().map(|(c, x)| (c.clone(), x * s)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StratumClass, &Rat)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Realize the formal sum as a rational function in `L`.
    pub fn sch_realize(&self) -> RationalFn {
        let mut acc = RationalFn::zero();
        for (c, x) in &self.0 {
            acc = acc.add(&c.point_motive().scale(x));
        }
        acc
    }

    /// Scissor normal form for torus classes: every free coordinate is
    /// split into its zero and nonzero parts ([A^1] = [{0}] + [Gm]),
    /// leaving a combination of point classes with pairwise disjoint
    /// supports. Table classes are left untouched.
    pub fn refine(&self) -> StrataMotive {
        let mut out = StrataMotive::zero();
        for (c, x) in &self.0 {
            match &c.kind {
                StratumKind::Torus { torus_rank, zero, nonzero, free } => {
                    for mask in 0u64..(1u64 << free.len()) {
                        let mut z = zero.clone();
                        let mut nz = nonzero.clone();
                        for (k, &i) in free.iter().enumerate() {
                            if mask >> k & 1 == 1 {
                                nz.push(i);
                            } else {
                                z.push(i);
                            }
                        }
                        z.sort_unstable();
                        nz.sort_unstable();
                        out.add_class(
                            StratumClass {
                                face: c.face.clone(),
                                kind: StratumKind::Torus {
                                    torus_rank: *torus_rank,
                                    zero: z,
                                    nonzero: nz,
                                    free: Vec::new(),
                                },
                            },
                            x.clone(),
                        );
                    }
                }
                StratumKind::Table { .. } => out.add_class(c.clone(), x.clone()),
            }
        }
        out
    }
}

impl FromIterator<(StratumClass, Rat)> for StrataMotive {
    fn from_iter<T: IntoIterator<Item = (StratumClass, Rat)>>(iter: T) -> Self {
        let mut m = StrataMotive::zero();
        for (c, x) in iter {
            m.add_class(c, x);
        }
        m
    }
}
