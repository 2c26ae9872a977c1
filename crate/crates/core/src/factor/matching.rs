//! Maximum bipartite matching (Hopcroft–Karp).

use std::collections::VecDeque;

/// A maximum matching between left vertices `0..adj.len()` and right
/// vertices `0..n_right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
    pub size: usize,
}

/// Hopcroft–Karp. Neighbour lists are scanned in the given order, so the
/// result is deterministic for a fixed input.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Matching {
    let n_left = adj.len();
    let mut left = vec![None; n_left];
    let mut right: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![usize::MAX; n_left];
    let mut size = 0;

    loop {
        // Layer the free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match right[v] {
                    None => found = true,
                    Some(w) if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n_left {
            if left[u].is_none() && augment(u, adj, &mut left, &mut right, &mut dist) {
                size += 1;
            }
        }
    }
    Matching { left, right, size }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    left: &mut [Option<usize>],
    right: &mut [Option<usize>],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let ok = match right[v] {
            None => true,
            Some(w) => dist[w] == dist[u] + 1 && augment(w, adj, left, right, dist),
        };
        if ok {
            left[u] = Some(v);
            right[v] = Some(u);
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}
