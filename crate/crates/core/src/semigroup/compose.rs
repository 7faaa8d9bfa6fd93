use std::collections::HashMap;

use dashu::integer::UBig;
use dashu::rational::RBig;

use super::{GeneratorSet, Word};
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 10_000;

/// Dense coefficients, lowest degree first, no trailing zeros.
pub type Polynomial = Vec<RBig>;

fn mul(a: &[RBig], b: &[RBig]) -> Polynomial {
    let mut out = vec![RBig::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == RBig::ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pow(p: &[RBig], mut e: usize) -> Polynomial {
    let mut base = p.to_vec();
    let mut acc = vec![RBig::ONE];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

/// Coefficients of the composed polynomial `θ_1 ∘ … ∘ θ_m`.
pub fn compose_symbolic(word: &Word, set: &GeneratorSet, degree_cap: usize) -> Result<Polynomial> {
    if word.degree() > &UBig::from(degree_cap) {
        return Err(Error::ResourceLimit(format!(
            "composed degree {} exceeds cap {degree_cap}",
            word.degree()
        )));
    }
    let mut p: Polynomial = vec![RBig::ZERO, RBig::ONE];
    for &i in word.indices().iter().rev() {
        let g = &set.generators()[i];
        let d: usize = g.degree().try_into().expect("bounded by the cap");
        let mut q = pow(&p, d);
        q[0] += g.constant();
        if g.is_negated() {
            q.iter_mut().for_each(|c| *c = -c.clone());
        }
        p = q;
    }
    while p.len() > 1 && p.last() == Some(&RBig::ZERO) {
        p.pop();
    }
    Ok(p)
}

/// Result of comparing composed polynomials of all short words.
#[derive(Clone, Debug)]
pub struct CollisionSearch {
    pub words_checked: usize,
    /// Two distinct words with equal polynomials, shortest first.
    pub collision: Option<(Word, Word)>,
}

/// Composes every word of length `<= max_len` and reports the first pair of
/// distinct words giving the same polynomial.
pub fn find_composition_collision(set: &GeneratorSet, max_len: usize, degree_cap: usize) -> Result<CollisionSearch> {
    let mut seen: HashMap<Polynomial, Word> = HashMap::new();
    let mut layer = vec![Word::identity()];
    let mut words_checked = 0;
    for len in 0..=max_len {
        for w in &layer {
            let p = compose_symbolic(w, set, degree_cap)?;
            words_checked += 1;
            if let Some(prev) = seen.get(&p) {
                return Ok(CollisionSearch { words_checked, collision: Some((prev.clone(), w.clone())) });
            }
            seen.insert(p, w.clone());
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * set.len());
        for w in &layer {
            for i in 0..set.len() {
                next.push(w.precompose(i, set)?);
            }
        }
        layer = next;
    }
    Ok(CollisionSearch { words_checked, collision: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Generator;

    fn set(degrees: &[u64]) -> GeneratorSet {
        let d: Vec<UBig> = degrees.iter().map(|&x| UBig::from(x)).collect();
        GeneratorSet::with_shared_constant(&d, RBig::ONE).unwrap()
    }

    fn coeffs(v: &[i64]) -> Polynomial {
        v.iter().map(|&x| RBig::from(x)).collect()
    }

    #[test]
    fn single_letter() {
        let s = set(&[2]);
        let w = Word::new(vec![0], &s).unwrap();
        assert_eq!(compose_symbolic(&w, &s, DEFAULT_DEGREE_CAP).unwrap(), coeffs(&[1, 0, 1]));
    }

    #[test]
    fn square_after_cube() {
        // (z^2 + 1) ∘ (z^3 + 1) = z^6 + 2 z^3 + 2
        let s = set(&[2, 3]);
        let w = Word::new(vec![0, 1], &s).unwrap();
        assert_eq!(compose_symbolic(&w, &s, DEFAULT_DEGREE_CAP).unwrap(), coeffs(&[2, 0, 0, 2, 0, 0, 1]));
    }

    #[test]
    fn cube_after_square() {
        // (z^3 + 1) ∘ (z^2 + 1) = z^6 + 3 z^4 + 3 z^2 + 2
        let s = set(&[2, 3]);
        let w = Word::new(vec![1, 0], &s).unwrap();
        assert_eq!(compose_symbolic(&w, &s, DEFAULT_DEGREE_CAP).unwrap(), coeffs(&[2, 0, 3, 0, 3, 0, 1]));
    }

    #[test]
    fn identity_is_z() {
        let s = set(&[2]);
        assert_eq!(compose_symbolic(&Word::identity(), &s, 10).unwrap(), coeffs(&[0, 1]));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let s = set(&[5]);
        let w = Word::new(vec![0; 6], &s).unwrap();
        assert!(matches!(compose_symbolic(&w, &s, DEFAULT_DEGREE_CAP), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn symbolic_matches_evaluation() {
        let s = set(&[2, 3]);
        let w = Word::new(vec![1, 0, 1], &s).unwrap();
        let p = compose_symbolic(&w, &s, DEFAULT_DEGREE_CAP).unwrap();
        let x = RBig::from_parts(dashu::integer::IBig::from(-3), UBig::from(7u8));
        let mut horner = RBig::ZERO;
        for c in p.iter().rev() {
            horner = horner * &x + c;
        }
        let pt = crate::height::RationalPoint::Finite(x);
        assert_eq!(crate::semigroup::evaluate(&w, &s, &pt).unwrap(), crate::height::RationalPoint::Finite(horner));
    }

    #[test]
    fn non_free_pair_collides_at_length_two() {
        let s = GeneratorSet::new(vec![
            Generator::new(UBig::from(2u8), RBig::ONE).unwrap(),
            Generator::negated(UBig::from(2u8), RBig::ONE).unwrap(),
        ])
        .unwrap();
        let r = find_composition_collision(&s, 3, DEFAULT_DEGREE_CAP).unwrap();
        let (a, b) = r.collision.expect("collision");
        assert_eq!(a.len(), 2);
        assert_eq!(b.len(), 2);
        assert_eq!(a.indices(), &[0, 0]);
        assert_eq!(b.indices(), &[0, 1]);
    }
}
