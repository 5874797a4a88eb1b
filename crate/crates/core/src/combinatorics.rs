//! Irreducibility and cycle structure of permutations.

use crate::iet::Permutation;

/// True iff no proper prefix `{1..k}`, `k < m`, is mapped onto itself.
pub fn is_irreducible(pi: &Permutation) -> bool {
    // π({1..k}) = {1..k} iff max(π(1..k)) = k
    let mut max = 0;
    for k in 1..pi.size() {
        max = max.max(pi.image(k));
        if max == k {
            return false;
        }
    }
    true
}

/// Disjoint cycles covering `{1..n}`, each starting at its least element,
/// sorted by that element. Fixed points appear as 1-cycles.
pub fn cycle_decomposition(sigma: &Permutation) -> Vec<Vec<usize>> {
    let n = sigma.size();
    let mut seen = vec![false; n + 1];
    let mut cycles = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = sigma.image(i);
        }
        cycles.push(cycle);
    }
    cycles
}

/// True iff `sigma` is a single cycle of length `n`.
pub fn is_n_cycle(sigma: &Permutation) -> bool {
    let mut i = sigma.image(1);
    let mut len = 1;
    while i != 1 {
        i = sigma.image(i);
        len += 1;
    }
    len == sigma.size()
}

/// Lengths of the cycles through each element, indexed from 1.
pub fn cycle_lengths(sigma: &Permutation) -> Vec<usize> {
    let mut out = vec![0; sigma.size()];
    for c in cycle_decomposition(sigma) {
        for &i in &c {
            out[i - 1] = c.len();
        }
    }
    out
}

/// All permutations of `{1..n}` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = vec![Permutation::new(current.clone()).expect("identity")];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Permutation::new(current.clone()).expect("permutation"));
    }
}
