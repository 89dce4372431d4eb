//! Exact univariate polynomials over `Q(i)`: Euclidean division, gcd,
//! square-free (Yun) decomposition, and gcd-free bases. Everything here is
//! exact; degrees stay tiny (bounded by the pencil size), so no effort is
//! spent on asymptotics.

use crate::rational::Qi;

/// Polynomial with ascending coefficients; the invariant is that the last
/// coefficient is nonzero unless the polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq)]
pub struct QiPoly {
    pub c: Vec<Qi>,
}

impl QiPoly {
    pub fn new(mut c: Vec<Qi>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        QiPoly { c }
    }

    pub fn zero() -> Self {
        QiPoly { c: vec![] }
    }

    pub fn one() -> Self {
        QiPoly { c: vec![Qi::one()] }
    }

    pub fn constant(q: Qi) -> Self {
        Self::new(vec![q])
    }

    /// `s - λ`.
    pub fn s_minus(lambda: &Qi) -> Self {
        QiPoly { c: vec![-lambda, Qi::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; zero polynomial reports 0 (callers check `is_zero` first).
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Qi {
        self.c.last().cloned().unwrap_or_else(Qi::zero)
    }

    pub fn eval(&self, x: &Qi) -> Qi {
        let mut acc = Qi::zero();
        for coeff in self.c.iter().rev() {
            acc = &(&acc * x) + coeff;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(Qi::zero);
            let b = other.c.get(i).cloned().unwrap_or_else(Qi::zero);
            c.push(&a + &b);
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QiPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Qi::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, q: &Qi) -> Self {
        Self::new(self.c.iter().map(|x| x * q).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * &Qi::from_ints(i as i64, 0))
            .collect();
        Self::new(c)
    }

    /// Exact Euclidean division: `(quotient, remainder)`.
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dlead = divisor.leading().inv();
        let dd = divisor.degree();
        let mut rem = self.c.clone();
        if rem.len() < divisor.c.len() {
            return (Self::zero(), self.clone());
        }
        let qlen = rem.len() - divisor.c.len() + 1;
        let mut q = vec![Qi::zero(); qlen];
        for k in (0..qlen).rev() {
            let coeff = &rem[k + dd] * &dlead;
            if !coeff.is_zero() {
                for (j, dc) in divisor.c.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&coeff * dc);
                }
            }
            q[k] = coeff;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).1.is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicity of the exact root `λ` (0 when not a root).
    pub fn root_multiplicity(&self, lambda: &Qi) -> usize {
        if self.is_zero() {
            panic!("root multiplicity of the zero polynomial");
        }
        let lin = Self::s_minus(lambda);
        let mut f = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = f.divmod(&lin);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            f = q;
            if f.is_zero() {
                return m;
            }
        }
    }

    /// Number of trailing zero coefficients: the multiplicity of the root 0.
    pub fn valuation_at_zero(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }
}

/// Monic gcd via the Euclidean algorithm.
pub fn gcd(a: &QiPoly, b: &QiPoly) -> QiPoly {
    let mut x = a.monic();
    let mut y = b.monic();
    if x.is_zero() {
        return y;
    }
    while !y.is_zero() {
        let r = x.divmod(&y).1;
        x = y;
        y = r.monic();
    }
    x.monic()
}

/// Yun's square-free decomposition: returns pairs `(factor, multiplicity)`
/// with the factors square-free, pairwise coprime, monic, non-constant, and
/// `input = leading · Π factor^multiplicity`.
pub fn square_free(f: &QiPoly) -> Vec<(QiPoly, usize)> {
    let mut out = Vec::new();
    if f.is_zero() || f.degree() == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a = gcd(&f, &df);
    let mut b = f.divmod(&a).0;
    let mut c = df.divmod(&a).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1usize;
    while b.degree() > 0 {
        let ai = gcd(&b, &d);
        if ai.degree() > 0 {
            out.push((ai.clone(), i));
        }
        b = b.divmod(&ai).0;
        c = d.divmod(&ai).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Refine a list of square-free polynomials into a gcd-free basis: pairwise
/// coprime, square-free, monic members such that every input is a product of
/// members. Quadratic worklist algorithm, fine at desk scale.
pub fn gcd_free_basis(inputs: &[QiPoly]) -> Vec<QiPoly> {
    let mut basis: Vec<QiPoly> = Vec::new();
    let mut work: Vec<QiPoly> = inputs
        .iter()
        .filter(|p| !p.is_zero() && p.degree() > 0)
        .map(|p| p.monic())
        .collect();
    'outer: while let Some(mut p) = work.pop() {
        if p.degree() == 0 {
            continue;
        }
        let mut idx = 0;
        while idx < basis.len() {
            let g = gcd(&p, &basis[idx]);
            if g.degree() == 0 {
                idx += 1;
                continue;
            }
            if g.degree() == basis[idx].degree() {
                // basis element divides p: strip it and keep scanning.
                p = p.divmod(&basis[idx]).0;
                if p.degree() == 0 {
                    continue 'outer;
                }
                idx += 1;
            } else {
                // proper split: basis[idx] = g * h with both nontrivial.
                let h = basis[idx].divmod(&g).0;
                basis.swap_remove(idx);
                work.push(g);
                work.push(h);
                work.push(p);
                continue 'outer;
            }
        }
        if p.degree() > 0 {
            basis.push(p);
        }
    }
    basis
}
