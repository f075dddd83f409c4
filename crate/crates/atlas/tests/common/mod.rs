#![allow(dead_code)]

use std::collections::HashSet;

use atlas::fingrp::FiniteGroup;

pub fn s3() -> FiniteGroup {
    FiniteGroup::from_perms(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
}

pub fn d8() -> FiniteGroup {
    FiniteGroup::from_perms(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).unwrap()
}

pub fn a4() -> FiniteGroup {
    FiniteGroup::from_perms(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]).unwrap()
}

pub fn s4() -> FiniteGroup {
    FiniteGroup::from_perms(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).unwrap()
}

pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z/4", FiniteGroup::cyclic(4)),
        ("Z/6", FiniteGroup::cyclic(6)),
        ("S3", s3()),
        ("D8", d8()),
        ("A4", a4()),
        ("S4", s4()),
        ("Z/2 x Z/2", FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        ("Q8", atlas::fingrp::corpus::q8()),
    ]
}

/// Conjugacy classes counted by direct conjugation with every element.
pub fn brute_class_count(g: &FiniteGroup) -> usize {
    let n = g.order() as u32;
    let mut seen = vec![false; n as usize];
    let mut count = 0;
    for x in 0..n {
        if seen[x as usize] {
            continue;
        }
        count += 1;
        for y in 0..n {
            let c = g.mul(g.mul(y, x), g.inv(y));
            seen[c as usize] = true;
        }
    }
    count
}

/// Classes of the subgroup on `elems` (a subset of `g` closed under products).
pub fn brute_subgroup_classes(g: &FiniteGroup, elems: &[u32]) -> usize {
    let set: HashSet<u32> = elems.iter().copied().collect();
    let mut seen: HashSet<u32> = HashSet::new();
    let mut count = 0;
    for &x in elems {
        if seen.contains(&x) {
            continue;
        }
        count += 1;
        for &y in elems {
            let c = g.mul(g.mul(y, x), g.inv(y));
            assert!(set.contains(&c));
            seen.insert(c);
        }
    }
    count
}

/// Left multiplication on the left cosets of the subgroup generated by `gens`.
pub fn coset_action(g: &FiniteGroup, gens: &[u32]) -> Vec<Vec<usize>> {
    let k = g.closure(gens);
    let n = g.order() as u32;
    let key = |a: u32| -> u32 { k.iter().map(|&h| g.mul(a, h)).min().unwrap() };
    let mut reps: Vec<u32> = (0..n).map(key).collect();
    reps.sort_unstable();
    reps.dedup();
    (0..n)
        .map(|x| reps.iter().map(|&r| reps.binary_search(&key(g.mul(x, r))).unwrap()).collect())
        .collect()
}

/// Conjugation action of `g` on itself.
pub fn conjugation_action(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order() as u32;
    (0..n)
        .map(|x| (0..n).map(|y| g.mul(g.mul(x, y), g.inv(x)) as usize).collect())
        .collect()
}

pub fn disjoint_union(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let off = a[0].len();
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().copied().chain(rb.iter().map(|&y| y + off)).collect())
        .collect()
}

pub fn product_action(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let nb = b[0].len();
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            (0..ra.len() * nb)
                .map(|i| ra[i / nb] * nb + rb[i % nb])
                .collect()
        })
        .collect()
}
