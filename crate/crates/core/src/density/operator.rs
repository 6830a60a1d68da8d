//! Symbolic algebra for the expansion's correction operators.
//!
//! Operators are finite sums `c * (x - xbar)^p d^k` held in normal order
//! (polynomial factors to the left of derivatives). Composition uses the
//! one-dimensional commutation rule `d^k x^q = sum_j C(k,j) q!/(q-j)!
//! x^{q-j} d^{k-j}` applied per axis; axes commute with each other.
//!
//! Each correction-operator factor also carries a scalar polynomial in the
//! elapsed time `u = t_j - t`, so nested time-ordered integrals over
//! `t < t_1 < ... < t_k < T` reduce to exact polynomial integrals.

use std::collections::BTreeMap;

use crate::market_models::MultiIndex;

/// `(polynomial powers, derivative orders) -> coefficient`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Operator {
    pub terms: BTreeMap<(MultiIndex, MultiIndex), f64>,
}

fn binom(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

fn falling(q: usize, j: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (q - i) as f64;
    }
    acc
}

impl Operator {
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(([0, 0], [0, 0]), 1.0);
        Operator { terms }
    }

    pub fn add_term(&mut self, p: MultiIndex, k: MultiIndex, c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((p, k)).or_insert(0.0);
        *e += c;
        if e.abs() < 1e-300 {
            self.terms.remove(&(p, k));
        }
    }

    pub fn add_scaled(&mut self, other: &Operator, s: f64) {
        for (&(p, k), &c) in &other.terms {
            self.add_term(p, k, c * s);
        }
    }

    /// Normal-ordered composition `self . rhs`.
    pub fn mul(&self, rhs: &Operator) -> Operator {
        let mut out = Operator::default();
        for (&(p, k), &c) in &self.terms {
            for (&(q, l), &d) in &rhs.terms {
                for j0 in 0..=k[0].min(q[0]) {
                    for j1 in 0..=k[1].min(q[1]) {
                        let w = c
                            * d
                            * binom(k[0], j0)
                            * falling(q[0], j0)
                            * binom(k[1], j1)
                            * falling(q[1], j1);
                        let poly = [p[0] + q[0] - j0, p[1] + q[1] - j1];
                        let deriv = [k[0] + l[0] - j0, k[1] + l[1] - j1];
                        out.add_term(poly, deriv, w);
                    }
                }
            }
        }
        out
    }

    /// Drop polynomial factors: the surviving pure-derivative terms are what
    /// the operator contributes when evaluated at `x = xbar`.
    pub fn at_center(&self) -> BTreeMap<MultiIndex, f64> {
        let mut out = BTreeMap::new();
        for (&(p, k), &c) in &self.terms {
            if p == [0, 0] {
                *out.entry(k).or_insert(0.0) += c;
            }
        }
        out.retain(|_, v| v.abs() > 0.0);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.abs() < 1e-300)
    }
}

/// Scalar polynomial in the elapsed time `u`, ascending coefficients.
pub type TimePoly = Vec<f64>;

pub fn poly_mul(a: &TimePoly, b: &TimePoly) -> TimePoly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_eval(p: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in p.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

/// Operator with time-polynomial coefficients.
#[derive(Clone, Debug, Default)]
pub struct TimedOperator {
    pub terms: BTreeMap<(MultiIndex, MultiIndex), TimePoly>,
}

impl TimedOperator {
    pub fn add_term(&mut self, p: MultiIndex, k: MultiIndex, tp: &TimePoly) {
        if tp.iter().all(|c| *c == 0.0) {
            return;
        }
        let e = self.terms.entry((p, k)).or_default();
        if e.len() < tp.len() {
            e.resize(tp.len(), 0.0);
        }
        for (i, c) in tp.iter().enumerate() {
            e[i] += c;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for tp in self.terms.values_mut() {
            for c in tp.iter_mut() {
                *c *= s;
            }
        }
    }

    pub fn add(&mut self, other: &TimedOperator) {
        for ((p, k), tp) in &other.terms {
            self.add_term(*p, *k, tp);
        }
    }

    pub fn mul(&self, rhs: &TimedOperator) -> TimedOperator {
        let mut out = TimedOperator::default();
        for (&(p, k), ta) in &self.terms {
            for (&(q, l), tb) in &rhs.terms {
                let tp = poly_mul(ta, tb);
                for j0 in 0..=k[0].min(q[0]) {
                    for j1 in 0..=k[1].min(q[1]) {
                        let w = binom(k[0], j0)
                            * falling(q[0], j0)
                            * binom(k[1], j1)
                            * falling(q[1], j1);
                        let poly = [p[0] + q[0] - j0, p[1] + q[1] - j1];
                        let deriv = [k[0] + l[0] - j0, k[1] + l[1] - j1];
                        let scaled: TimePoly = tp.iter().map(|c| c * w).collect();
                        let mut tmp = TimedOperator::default();
                        tmp.add_term(poly, deriv, &scaled);
                        out.add(&tmp);
                    }
                }
            }
        }
        out
    }

    /// Split into plain operators grouped by the power of `u`.
    pub fn by_degree(&self) -> Vec<Operator> {
        let max_deg = self
            .terms
            .values()
            .map(|tp| tp.len())
            .max()
            .unwrap_or(0);
        let mut out = vec![Operator::default(); max_deg];
        for (&(p, k), tp) in &self.terms {
            for (deg, c) in tp.iter().enumerate() {
                out[deg].add_term(p, k, *c);
            }
        }
        out
    }

    /// Evaluate the time polynomials at a fixed `u`, leaving a plain operator.
    pub fn at_time(&self, u: f64) -> Operator {
        let mut out = Operator::default();
        for (&(p, k), tp) in &self.terms {
            out.add_term(p, k, poly_eval(tp, u));
        }
        out
    }
}

/// Exact value of the nested time-ordered integral
/// `int_{t<t_1<...<t_k<T} prod_j (t_j - t)^{d_j} dt_1..dt_k` with `tau = T - t`.
pub fn simplex_integral(degrees: &[usize], tau: f64) -> f64 {
    // March from the innermost integral outwards, carrying a polynomial in
    // the previous level's variable.
    let mut g: Vec<f64> = vec![1.0];
    for &d in degrees.iter().rev() {
        let mut anti = vec![0.0; g.len() + d + 1];
        for (i, c) in g.iter().enumerate() {
            anti[i + d + 1] = c / (i + d + 1) as f64;
        }
        let at_tau = poly_eval(&anti, tau);
        let mut next: Vec<f64> = anti.iter().map(|c| -c).collect();
        next[0] += at_tau;
        g = next;
    }
    poly_eval(&g, 0.0)
}

/// Ordered tuples of positive integers of length `k` summing to `n`.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            if n >= 1 {
                prefix.push(n);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for first in 1..=(n + 1 - k) {
            prefix.push(first);
            rec(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && n >= k {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}
