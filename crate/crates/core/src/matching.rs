//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching of the bipartite graph with `adj[l]` listing the right
/// neighbours of left vertex `l`. Returns the partner of every left vertex.
///
/// Left vertices and adjacency lists are scanned in the given order, so the
/// result is deterministic.
pub fn maximum_matching(right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_left = vec![NIL; left];
    let mut match_right = vec![NIL; right];
    let mut dist = vec![0usize; left];

    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..left {
            if match_left[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = NIL;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_right[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == NIL {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..left {
            if match_left[l] == NIL {
                augment(l, adj, &mut match_left, &mut match_right, &mut dist);
            }
        }
    }
    match_left
        .into_iter()
        .map(|r| (r != NIL).then_some(r))
        .collect()
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        let next = match_right[r];
        if next == NIL
            || (dist[next] == dist[l] + 1 && augment(next, adj, match_left, match_right, dist))
        {
            match_left[l] = r;
            match_right[r] = l;
            return true;
        }
    }
    dist[l] = NIL;
    false
}
