//! Seeded random instance generation: spaces, distributions, kernels,
//! measure-preserving kernels, and stationary chains — all exact.
//!
//! Random rationals are drawn with bounded denominators and renormalized
//! exactly, so generated objects satisfy their invariants on the nose.
//! Measure-preserving kernels come from random transport plans (couplings
//! with both marginals equal to the given distribution); stationary
//! distributions of random chains come from closed-class detection plus
//! exact Gaussian elimination.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::kernel::Kernel;
use crate::ps::{ProbSpace, PsMorphism};
use crate::rational::Rat;
use crate::space::{Dist, FinSpace};

/// Random rational in `[0, 1]` with denominator at most `max_den`.
pub fn rand_unit_rat(rng: &mut impl Rng, max_den: u32) -> Rat {
    let den = rng.random_range(1..=max_den as i64);
    let num = rng.random_range(0..=den);
    crate::rational::rat(num, den)
}

/// Random point of the simplex: nonnegative rationals summing to exactly 1.
/// With `allow_zeros`, roughly a quarter of the entries are zeroed.
pub fn rand_simplex(rng: &mut impl Rng, n: usize, max_den: u32, allow_zeros: bool) -> Vec<Rat> {
    loop {
        let raw: Vec<Rat> = (0..n)
            .map(|_| {
                if allow_zeros && rng.random_ratio(1, 4) {
                    Rat::zero()
                } else {
                    rand_unit_rat(rng, max_den)
                }
            })
            .collect();
        let total = crate::rational::sum(&raw);
        if total.is_zero() {
            continue;
        }
        return raw.into_iter().map(|v| v / &total).collect();
    }
}

/// Fresh space with labels `s0, s1, …`.
pub fn rand_space(rng: &mut impl Rng, min_states: usize, max_states: usize) -> FinSpace {
    let n = rng.random_range(min_states..=max_states);
    FinSpace::new((0..n).map(|i| format!("s{i}"))).expect("generated labels are distinct")
}

pub fn rand_dist(rng: &mut impl Rng, space: &FinSpace, max_den: u32, allow_zeros: bool) -> Dist {
    let mass = rand_simplex(rng, space.len(), max_den, allow_zeros);
    Dist::new(space.clone(), mass).expect("simplex point is a distribution")
}

pub fn rand_prob_space(
    rng: &mut impl Rng,
    min_states: usize,
    max_states: usize,
    max_den: u32,
    allow_zeros: bool,
) -> ProbSpace {
    let space = rand_space(rng, min_states, max_states);
    let dist = rand_dist(rng, &space, max_den, allow_zeros);
    ProbSpace::new(dist)
}

/// Random stochastic matrix with exact rows.
pub fn rand_kernel(
    rng: &mut impl Rng,
    source: &FinSpace,
    target: &FinSpace,
    max_den: u32,
) -> Kernel {
    let rows = (0..source.len())
        .map(|_| rand_simplex(rng, target.len(), max_den, true))
        .collect();
    Kernel::new(source.clone(), target.clone(), rows).expect("simplex rows are stochastic")
}

/// Random deterministic kernel.
pub fn rand_dirac(rng: &mut impl Rng, source: &FinSpace, target: &FinSpace) -> Kernel {
    let images: Vec<usize> = (0..source.len())
        .map(|_| rng.random_range(0..target.len()))
        .collect();
    Kernel::dirac(source.clone(), target.clone(), move |x| images[x])
}

/// Random morphism out of `src`: a random kernel together with its
/// pushforward as the target measure, which makes it measure-preserving by
/// construction.
pub fn rand_ps_morphism(
    rng: &mut impl Rng,
    src: &ProbSpace,
    max_target_states: usize,
    max_den: u32,
) -> PsMorphism {
    let target =
        FinSpace::new((0..rng.random_range(1..=max_target_states)).map(|i| format!("t{i}")))
            .expect("generated labels are distinct");
    let kernel = rand_kernel(rng, src.space(), &target, max_den);
    morphism_onto_push(src, kernel)
}

/// Wraps a kernel out of `src` as a morphism onto its own pushforward.
pub fn morphism_onto_push(src: &ProbSpace, kernel: Kernel) -> PsMorphism {
    let q = kernel
        .push(src.dist())
        .expect("kernel matches source space");
    let dst = ProbSpace::new(q);
    PsMorphism::new(src.clone(), dst, kernel).expect("pushforward target is measure-preserving")
}

/// Random morphism into a fixed space `(X, p)`: generated as the Bayesian
/// inverse of a random morphism out of `(X, p)`.
pub fn rand_ps_morphism_into(
    rng: &mut impl Rng,
    dst: &ProbSpace,
    max_source_states: usize,
    max_den: u32,
) -> PsMorphism {
    rand_ps_morphism(rng, dst, max_source_states, max_den).dagger()
}

/// One vertex of the transportation polytope with both marginals `mass`,
/// built by greedy filling along randomly shuffled source/target orders.
fn rand_transport_vertex(rng: &mut impl Rng, mass: &[Rat], support: &[usize]) -> Vec<Vec<Rat>> {
    let n = mass.len();
    let mut plan = vec![vec![Rat::zero(); n]; n];
    let mut row_order = support.to_vec();
    let mut col_order = support.to_vec();
    row_order.shuffle(rng);
    col_order.shuffle(rng);
    let mut row_left: Vec<Rat> = mass.to_vec();
    let mut col_left: Vec<Rat> = mass.to_vec();
    let (mut i, mut j) = (0, 0);
    while i < row_order.len() && j < col_order.len() {
        let (r, c) = (row_order[i], col_order[j]);
        let amount = row_left[r].clone().min(col_left[c].clone());
        plan[r][c] += &amount;
        row_left[r] -= &amount;
        col_left[c] -= &amount;
        if row_left[r].is_zero() {
            i += 1;
        }
        if col_left[c].is_zero() {
            j += 1;
        }
    }
    plan
}

/// Random coupling with both marginals `mass`: an exact convex mixture of
/// random transport-plan vertices.
pub fn rand_coupling(rng: &mut impl Rng, mass: &[Rat], max_den: u32) -> Vec<Vec<Rat>> {
    let support: Vec<usize> = mass
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, _)| i)
        .collect();
    let n = mass.len();
    let parts = rng.random_range(1..=3usize);
    let weights = rand_simplex(rng, parts, max_den, false);
    let mut mixed = vec![vec![Rat::zero(); n]; n];
    for weight in weights {
        let vertex = rand_transport_vertex(rng, mass, &support);
        for (row, vrow) in mixed.iter_mut().zip(&vertex) {
            for (cell, v) in row.iter_mut().zip(vrow) {
                if !v.is_zero() {
                    *cell += &weight * v;
                }
            }
        }
    }
    mixed
}

/// Random kernel preserving `base.p`, derived from a random coupling; rows
/// at null states are arbitrary random distributions.
pub fn rand_preserving_kernel(rng: &mut impl Rng, base: &ProbSpace, max_den: u32) -> Kernel {
    rand_block_preserving_kernel(rng, base, &[base.support().to_vec()], max_den)
}

/// Random kernel preserving `base.p` that keeps each given support block
/// invariant: an independent coupling is drawn within every block, so the
/// blocks become (unions of) components of the resulting dynamics.
pub fn rand_block_preserving_kernel(
    rng: &mut impl Rng,
    base: &ProbSpace,
    support_blocks: &[Vec<usize>],
    max_den: u32,
) -> Kernel {
    let n = base.len();
    let p = base.dist().mass();
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|x| {
            if base.in_support(x) {
                vec![Rat::zero(); n]
            } else {
                rand_simplex(rng, n, max_den, true)
            }
        })
        .collect();
    for block in support_blocks {
        let mut block_mass = vec![Rat::zero(); n];
        for &x in block {
            block_mass[x] = p[x].clone();
        }
        let plan = rand_coupling(rng, &block_mass, max_den);
        for &x in block {
            for y in 0..n {
                if !plan[x][y].is_zero() {
                    rows[x][y] = &plan[x][y] / &p[x];
                }
            }
        }
    }
    Kernel::new(base.space().clone(), base.space().clone(), rows)
        .expect("coupling rows normalize exactly")
}

/// Splits the support of `base` into up to `max_blocks` nonempty random
/// blocks.
pub fn rand_support_blocks(
    rng: &mut impl Rng,
    base: &ProbSpace,
    max_blocks: usize,
) -> Vec<Vec<usize>> {
    let support = base.support();
    let count = rng.random_range(1..=max_blocks.min(support.len()));
    loop {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); count];
        for &x in support {
            blocks[rng.random_range(0..count)].push(x);
        }
        blocks.retain(|b| !b.is_empty());
        if !blocks.is_empty() {
            return blocks;
        }
    }
}

/// Strongly connected classes of the positive-transition digraph that have
/// no outgoing edges (the recurrent classes of the chain), each sorted.
pub fn closed_classes(kernel: &Kernel) -> Vec<Vec<usize>> {
    let n = kernel.source().len();
    // Reachability closure; n is small at desk scale.
    let mut reach = vec![vec![false; n]; n];
    for (x, row) in reach.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = x == y || !kernel.entry(y, x).is_zero();
        }
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (y, &reachable) in via.iter().enumerate() {
                    if reachable {
                        row[y] = true;
                    }
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; n];
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&y| reach[x][y] && reach[y][x]).collect();
        let closed = class
            .iter()
            .all(|&y| (0..n).all(|z| kernel.entry(z, y).is_zero() || reach[z][y]));
        for &y in &class {
            assigned[y] = true;
        }
        if closed {
            classes.push(class);
        }
    }
    classes
}

/// Exact stationary distribution of the chain restricted to one closed
/// class, via rational Gaussian elimination; returned as a full-length mass
/// vector supported on the class.
pub fn stationary_of_class(kernel: &Kernel, class: &[usize]) -> Vec<Rat> {
    let c = class.len();
    let n = kernel.source().len();
    // Unknowns: mass at each class state. Equations: stationarity at all but
    // the last class state (one is redundant), plus normalization.
    let mut matrix: Vec<Vec<Rat>> = Vec::with_capacity(c);
    let mut rhs: Vec<Rat> = Vec::with_capacity(c);
    for &y in class.iter().take(c - 1) {
        let mut row: Vec<Rat> = class.iter().map(|&x| kernel.entry(y, x).clone()).collect();
        for (j, &x) in class.iter().enumerate() {
            if x == y {
                row[j] -= Rat::one();
            }
        }
        matrix.push(row);
        rhs.push(Rat::zero());
    }
    matrix.push(vec![Rat::one(); c]);
    rhs.push(Rat::one());

    let solution = solve_exact(matrix, rhs)
        .expect("irreducible closed class has a unique stationary distribution");
    let mut mass = vec![Rat::zero(); n];
    for (j, &x) in class.iter().enumerate() {
        mass[x] = solution[j].clone();
    }
    mass
}

/// Solves a square rational linear system by Gaussian elimination with
/// partial (first nonzero) pivoting. Returns `None` for singular systems.
pub fn solve_exact(mut matrix: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = matrix.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !matrix[r][col].is_zero())?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let scale = matrix[col][col].clone();
        for entry in matrix[col].iter_mut() {
            *entry /= &scale;
        }
        rhs[col] /= &scale;
        let pivot_row = matrix[col].clone();
        for row in 0..n {
            if row != col && !matrix[row][col].is_zero() {
                let factor = matrix[row][col].clone();
                for (cell, pivot) in matrix[row].iter_mut().zip(&pivot_row) {
                    *cell -= &factor * pivot;
                }
                let delta = &factor * &rhs[col];
                rhs[row] -= delta;
            }
        }
    }
    Some(rhs)
}

/// Random chain with an exactly computed invariant distribution: a random
/// stochastic matrix, its closed classes, per-class stationary solutions,
/// and a random mixture over classes (zero weights allowed, which produces
/// null recurrent classes and transient states).
pub fn rand_chain_with_stationary(
    rng: &mut impl Rng,
    min_states: usize,
    max_states: usize,
    max_den: u32,
) -> (ProbSpace, Kernel) {
    let space = rand_space(rng, min_states, max_states);
    let kernel = rand_kernel(rng, &space, &space, max_den);
    let classes = closed_classes(&kernel);
    let weights = rand_simplex(rng, classes.len(), max_den, classes.len() > 1);
    let mut mass = vec![Rat::zero(); space.len()];
    for (class, weight) in classes.iter().zip(&weights) {
        if weight.is_zero() {
            continue;
        }
        for (x, m) in stationary_of_class(&kernel, class).into_iter().enumerate() {
            if !m.is_zero() {
                mass[x] += weight * m;
            }
        }
    }
    let dist = Dist::new(space, mass).expect("mixture of stationary distributions normalizes");
    (ProbSpace::new(dist), kernel)
}
