use super::FiniteRep;
use crate::linalg::CMat;
use crate::C64;

/// A coefficient times an ordered product of basis generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub coeff: C64,
    pub letters: Vec<usize>,
}

/// sym(p) for p = Σ c_α X^α: each monomial becomes the average of its orderings.
pub fn symmetrize(terms: &[(C64, Vec<u32>)]) -> Vec<Word> {
    let mut out = vec![];
    for (c, alpha) in terms {
        let mut letters: Vec<usize> = alpha
            .iter()
            .enumerate()
            .flat_map(|(k, &a)| std::iter::repeat_n(k, a as usize))
            .collect();
        let k = letters.len();
        let total: f64 = (1..=k).map(|i| i as f64).product();
        let repeats: f64 = crate::poly::multi_factorial(alpha);
        // distinct orderings each stand for `repeats` of the k! permutations
        let w = *c * (repeats / total);
        loop {
            out.push(Word { coeff: w, letters: letters.clone() });
            if !next_permutation(&mut letters) {
                break;
            }
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Σ coeff · π(X_{l1})⋯π(X_{lk}).
pub fn evaluate_words(rep: &FiniteRep, words: &[Word]) -> CMat {
    let d = rep.dim();
    let mut acc = CMat::zeros(d, d);
    for w in words {
        let mut m = CMat::identity(d, d);
        for &l in &w.letters {
            m = m * &rep.generators[l];
        }
        acc += m * w.coeff;
    }
    acc
}
