//! Edge directions for the oriented (n,k)-star graph.
//!
//! Star edges follow the sign rule: an even node points along left-half
//! positions, an odd node along right-half positions. Clique edges compare
//! heads: equal signs point from the larger head to the smaller, opposite
//! signs from the smaller to the larger. Every fundamental clique then has
//! clique out-degree at least floor((n-k)/2) at each member, and every arc
//! sits on a short directed cycle, which is what the router relies on.

use std::io::Write;

use crate::error::{Error, Result};
use crate::permutation::{arm_split, Parity};
use crate::star_graph::{GraphParams, NodeId, NodeLabel};

/// Which kind of edge an arc travels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeType {
    Star { position: usize },
    Clique,
}

/// A directed edge of the oriented graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: NodeLabel,
    pub to: NodeLabel,
    pub edge_type: EdgeType,
}

fn clique_arc_from_first(
    head_a: usize,
    sign_a: Parity,
    head_b: usize,
    sign_b: Parity,
) -> bool {
    if sign_a == sign_b {
        head_a > head_b
    } else {
        head_a < head_b
    }
}

/// Direction of the star edge labelled `i` at `u`. The rule evaluated from
/// either endpoint yields the same arc because the endpoint signs differ.
pub fn orient_star_edge(u: &NodeLabel, i: usize, params: &GraphParams) -> Result<Arc> {
    params.check_routable()?;
    let v = u.star_neighbor(i)?;
    let mid = arm_split(params.k());
    let u_even = u.extended(params).sign().is_even();
    let from_u = if u_even { i <= mid } else { i > mid };
    let (from, to) = if from_u {
        (u.clone(), v)
    } else {
        (v, u.clone())
    };
    Ok(Arc {
        from,
        to,
        edge_type: EdgeType::Star { position: i },
    })
}

/// Direction of the clique edge between `u` and `v`.
pub fn orient_clique_edge(u: &NodeLabel, v: &NodeLabel, params: &GraphParams) -> Result<Arc> {
    params.check_routable()?;
    if u.arm() != v.arm() || u.head() == v.head() {
        return Err(Error::NotCliqueNeighbors(format!("{u} and {v}")));
    }
    let su = u.extended(params).sign();
    let sv = v.extended(params).sign();
    let (from, to) = if clique_arc_from_first(u.head(), su, v.head(), sv) {
        (u.clone(), v.clone())
    } else {
        (v.clone(), u.clone())
    };
    Ok(Arc {
        from,
        to,
        edge_type: EdgeType::Clique,
    })
}

/// All directed successors of `u`: star successors by edge label, then
/// clique successors by head value.
pub fn out_neighbors(u: &NodeLabel, params: &GraphParams) -> Vec<(NodeLabel, EdgeType)> {
    let k = params.k();
    let mid = arm_split(k);
    let u_ext = u.extended(params);
    let u_even = u_ext.sign().is_even();
    let mut out = Vec::new();
    for i in 2..=k {
        if if u_even { i <= mid } else { i > mid } {
            out.push((
                u.star_neighbor(i).expect("i in range"),
                EdgeType::Star { position: i },
            ));
        }
    }
    for v in u.clique_neighbors(params) {
        let sv = v.extended(params).sign();
        if clique_arc_from_first(u.head(), u_ext.sign(), v.head(), sv) {
            out.push((v, EdgeType::Clique));
        }
    }
    out
}

/// The oriented fundamental clique of a node: members share the arm and are
/// keyed by head value, listed in ascending head order. Signs alternate
/// along that order.
#[derive(Clone, Debug)]
pub struct OrientedClique {
    params: GraphParams,
    heads: Vec<usize>,
    signs: Vec<Parity>,
    arm: Vec<usize>,
}

pub fn oriented_clique(v: &NodeLabel, params: &GraphParams) -> OrientedClique {
    let mut heads = v.tail(params);
    heads.push(v.head());
    heads.sort_unstable();
    let arm = v.arm().to_vec();
    let signs = heads
        .iter()
        .map(|&h| {
            let mut symbols = vec![h];
            symbols.extend_from_slice(&arm);
            NodeLabel::new(symbols, params)
                .expect("clique member is a valid label")
                .extended(params)
                .sign()
        })
        .collect();
    OrientedClique {
        params: *params,
        heads,
        signs,
        arm,
    }
}

impl OrientedClique {
    /// Assembles a clique from raw parts; used to probe corrupted structures
    /// in the audit harness.
    pub fn from_parts(
        heads: Vec<usize>,
        signs: Vec<Parity>,
        arm: Vec<usize>,
        params: &GraphParams,
    ) -> Result<Self> {
        if heads.len() != signs.len() || heads.len() != params.clique_size() {
            return Err(Error::InvalidParams(
                "clique member count mismatch".into(),
            ));
        }
        Ok(OrientedClique {
            params: *params,
            heads,
            signs,
            arm,
        })
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    pub fn signs(&self) -> &[Parity] {
        &self.signs
    }

    pub fn arm(&self) -> &[usize] {
        &self.arm
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    fn index_of(&self, head: usize) -> Result<usize> {
        self.heads
            .binary_search(&head)
            .map_err(|_| Error::HeadNotInClique { head })
    }

    pub fn member(&self, head: usize) -> Result<NodeLabel> {
        self.index_of(head)?;
        let mut symbols = vec![head];
        symbols.extend_from_slice(&self.arm);
        NodeLabel::new(symbols, &self.params)
    }

    pub fn sign_of(&self, head: usize) -> Result<Parity> {
        Ok(self.signs[self.index_of(head)?])
    }

    /// True when the clique arc between the members runs `x -> y`.
    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        match (self.index_of(x), self.index_of(y)) {
            (Ok(ix), Ok(iy)) if ix != iy => {
                clique_arc_from_first(x, self.signs[ix], y, self.signs[iy])
            }
            _ => false,
        }
    }

    /// Heads reachable from `head` along a single out-arc.
    pub fn out_heads(&self, head: usize) -> Vec<usize> {
        self.heads
            .iter()
            .copied()
            .filter(|&j| j != head && self.has_arc(head, j))
            .collect()
    }

    pub fn out_degree(&self, head: usize) -> usize {
        self.out_heads(head).len()
    }

    /// Shortest directed path from `x` to `y` as a head sequence; among
    /// equal-length paths the lexicographically smallest is returned.
    pub fn shortest_path(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.index_of(x)?;
        self.index_of(y)?;
        self.path_search(x, y, None)
            .ok_or_else(|| Error::Disconnected {
                from: x.to_string(),
                to: y.to_string(),
            })
    }

    /// Shortest directed path from `x` to `y` that never visits the member
    /// with head `banned`; `None` when no such path exists.
    pub fn shortest_path_avoiding(
        &self,
        x: usize,
        y: usize,
        banned: usize,
    ) -> Option<Vec<usize>> {
        self.path_search(x, y, Some(banned))
    }

    fn path_search(&self, x: usize, y: usize, banned: Option<usize>) -> Option<Vec<usize>> {
        if x == y {
            return Some(vec![x]);
        }
        let m = self.heads.len();
        let iy = self.index_of(y).ok()?;
        // distance-to-target by reverse BFS, then a greedy head-minimal walk
        let mut dist = vec![usize::MAX; m];
        dist[iy] = 0;
        let mut queue = std::collections::VecDeque::from([iy]);
        while let Some(i) = queue.pop_front() {
            for j in 0..m {
                if dist[j] != usize::MAX || Some(self.heads[j]) == banned {
                    continue;
                }
                if self.has_arc(self.heads[j], self.heads[i]) {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        let ix = self.index_of(x).ok()?;
        if dist[ix] == usize::MAX {
            return None;
        }
        let mut path = vec![x];
        let mut cur = ix;
        while self.heads[cur] != y {
            let next = (0..m)
                .filter(|&j| {
                    Some(self.heads[j]) != banned
                        && dist[j] != usize::MAX
                        && dist[j] + 1 == dist[cur]
                        && self.has_arc(self.heads[cur], self.heads[j])
                })
                .min_by_key(|&j| self.heads[j])
                .expect("finite distance implies a successor");
            path.push(self.heads[next]);
            cur = next;
        }
        Some(path)
    }
}

/// Structural audit of one oriented fundamental clique.
#[derive(Clone, Debug)]
pub struct CliqueAudit {
    pub sign_counts_ok: bool,
    pub sign_alternation_ok: bool,
    pub out_degree_ok: bool,
    pub three_cycle_ok: bool,
    pub four_cycle_arc_ok: bool,
    pub failures: Vec<String>,
}

impl CliqueAudit {
    pub fn passed(&self) -> bool {
        self.sign_counts_ok
            && self.sign_alternation_ok
            && self.out_degree_ok
            && self.three_cycle_ok
            && self.four_cycle_arc_ok
    }
}

/// Checks sign balance and alternation, the out-degree floor((n-k)/2), and
/// that every arc closes into a directed 3-cycle inside the clique, except
/// the (min-head, max-head) arc when n-k is odd, which must close into a
/// directed 4-cycle.
pub fn audit_clique(clique: &OrientedClique) -> CliqueAudit {
    let params = clique.params();
    let tail_len = params.n() - params.k();
    let heads = clique.heads();
    let signs = clique.signs();
    let mut failures = Vec::new();

    let evens = signs.iter().filter(|s| s.is_even()).count();
    let odds = signs.len() - evens;
    let sign_counts_ok = if tail_len % 2 == 1 {
        evens == odds
    } else {
        evens.abs_diff(odds) == 1
    };
    if !sign_counts_ok {
        failures.push(format!("sign counts: {evens} even vs {odds} odd"));
    }

    let sign_alternation_ok = signs.windows(2).all(|w| w[0] != w[1]);
    if !sign_alternation_ok {
        failures.push("signs do not alternate along sorted heads".into());
    }

    let floor_half = tail_len / 2;
    let mut out_degree_ok = true;
    for &h in heads {
        let d = clique.out_degree(h);
        if d < floor_half {
            out_degree_ok = false;
            failures.push(format!("member {h} has clique out-degree {d} < {floor_half}"));
        }
    }

    let exceptional = if tail_len % 2 == 1 {
        Some((heads[0], heads[heads.len() - 1]))
    } else {
        None
    };
    let mut three_cycle_ok = true;
    let mut four_cycle_arc_ok = true;
    for &a in heads {
        for &b in heads {
            if a == b || !clique.has_arc(a, b) {
                continue;
            }
            if Some((a, b)) == exceptional {
                continue;
            }
            let on_three = heads
                .iter()
                .any(|&w| w != a && w != b && clique.has_arc(b, w) && clique.has_arc(w, a));
            if !on_three {
                three_cycle_ok = false;
                failures.push(format!("arc {a}->{b} lies on no directed 3-cycle"));
            }
        }
    }
    if let Some((lo, hi)) = exceptional {
        if !clique.has_arc(lo, hi) {
            four_cycle_arc_ok = false;
            failures.push(format!("expected arc {lo}->{hi} is missing"));
        } else {
            let on_four = heads.iter().any(|&w1| {
                w1 != lo
                    && w1 != hi
                    && clique.has_arc(hi, w1)
                    && heads.iter().any(|&w2| {
                        w2 != lo
                            && w2 != hi
                            && w2 != w1
                            && clique.has_arc(w1, w2)
                            && clique.has_arc(w2, lo)
                    })
            });
            if !on_four {
                four_cycle_arc_ok = false;
                failures.push(format!("arc {lo}->{hi} lies on no directed 4-cycle"));
            }
        }
    }

    CliqueAudit {
        sign_counts_ok,
        sign_alternation_ok,
        out_degree_ok,
        three_cycle_ok,
        four_cycle_arc_ok,
        failures,
    }
}

/// Writes every directed arc as `<from> <to> <type>`, sorted by
/// (from-rank, to-rank).
pub fn write_arc_list<W: Write>(params: &GraphParams, mut w: W) -> Result<()> {
    params.check_routable()?;
    let count = params.node_count()?;
    for id in 0..count {
        let u = params.unrank(NodeId(id))?;
        let mut arcs: Vec<(usize, NodeLabel, &str)> = out_neighbors(&u, params)
            .into_iter()
            .map(|(v, t)| {
                let r = params.rank(&v).0;
                let kind = match t {
                    EdgeType::Star { .. } => "star",
                    EdgeType::Clique => "clique",
                };
                (r, v, kind)
            })
            .collect();
        arcs.sort_by_key(|(r, _, _)| *r);
        for (_, v, kind) in arcs {
            writeln!(w, "{u} {v} {kind}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: usize) -> GraphParams {
        GraphParams::new(n, k).unwrap()
    }

    fn label(symbols: &[usize], p: &GraphParams) -> NodeLabel {
        NodeLabel::new(symbols.to_vec(), p).unwrap()
    }

    #[test]
    fn star_edge_directions_at_example_node() {
        let p = params(10, 5);
        let u = label(&[7, 2, 3, 4, 5], &p);

        let a2 = orient_star_edge(&u, 2, &p).unwrap();
        assert_eq!(a2.from, u);
        assert_eq!(a2.to.symbols(), &[2, 7, 3, 4, 5]);

        let a3 = orient_star_edge(&u, 3, &p).unwrap();
        assert_eq!(a3.from, u);

        let a4 = orient_star_edge(&u, 4, &p).unwrap();
        assert_eq!(a4.to, u);
        assert_eq!(a4.from.symbols(), &[4, 2, 3, 7, 5]);

        let a5 = orient_star_edge(&u, 5, &p).unwrap();
        assert_eq!(a5.to, u);

        assert!(orient_star_edge(&u, 1, &p).is_err());
        assert!(orient_star_edge(&u, 6, &p).is_err());
    }

    #[test]
    fn star_edge_consistent_from_both_endpoints() {
        let p = params(5, 3);
        for id in 0..p.node_count().unwrap() {
            let u = p.unrank(NodeId(id)).unwrap();
            for i in 2..=3 {
                let v = u.star_neighbor(i).unwrap();
                assert_eq!(
                    orient_star_edge(&u, i, &p).unwrap(),
                    orient_star_edge(&v, i, &p).unwrap()
                );
            }
        }
    }

    #[test]
    fn clique_edge_directions_match_example_clique() {
        let p = params(10, 5);
        let arm = [2, 3, 4, 5];
        let member = |h: usize| {
            let mut s = vec![h];
            s.extend_from_slice(&arm);
            NodeLabel::new(s, &p).unwrap()
        };
        // same sign: larger head -> smaller head
        let a = orient_clique_edge(&member(9), &member(7), &p).unwrap();
        assert_eq!(a.from.head(), 9);
        // opposite signs: smaller head -> larger head
        let b = orient_clique_edge(&member(1), &member(10), &p).unwrap();
        assert_eq!(b.from.head(), 1);
        let c = orient_clique_edge(&member(7), &member(8), &p).unwrap();
        assert_eq!(c.from.head(), 7);

        assert!(orient_clique_edge(&member(7), &label(&[7, 2, 3, 4, 6], &p), &p).is_err());
    }

    #[test]
    fn out_neighbors_match_example_figure() {
        let p = params(10, 5);
        let u = label(&[7, 2, 3, 4, 5], &p);
        let out = out_neighbors(&u, &p);
        let star_positions: Vec<usize> = out
            .iter()
            .filter_map(|(_, t)| match t {
                EdgeType::Star { position } => Some(*position),
                EdgeType::Clique => None,
            })
            .collect();
        let clique_heads: Vec<usize> = out
            .iter()
            .filter_map(|(v, t)| matches!(t, EdgeType::Clique).then(|| v.head()))
            .collect();
        assert_eq!(star_positions, vec![2, 3]);
        assert_eq!(clique_heads, vec![1, 8, 10]);
    }

    #[test]
    fn orientation_covers_every_edge_once() {
        let p = params(5, 3);
        let count = p.node_count().unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut total_degree = 0;
        for id in 0..count {
            let u = p.unrank(NodeId(id)).unwrap();
            for (v, _) in out_neighbors(&u, &p) {
                total_degree += 1;
                let key = (p.rank(&u), p.rank(&v));
                assert!(seen.insert(key), "duplicate arc {u} -> {v}");
                assert!(
                    !seen.contains(&(key.1, key.0)),
                    "both directions of {u} -- {v} produced"
                );
            }
        }
        // one arc per undirected edge: |E| = |V| (n-1) / 2
        assert_eq!(total_degree, count * 4 / 2);
    }

    #[test]
    fn oriented_clique_example() {
        let p = params(10, 5);
        let v = label(&[7, 2, 3, 4, 5], &p);
        let q = oriented_clique(&v, &p);
        assert_eq!(q.heads(), &[1, 6, 7, 8, 9, 10]);
        let expect = [
            Parity::Even,
            Parity::Odd,
            Parity::Even,
            Parity::Odd,
            Parity::Even,
            Parity::Odd,
        ];
        assert_eq!(q.signs(), &expect);
        let evens = q.signs().iter().filter(|s| s.is_even()).count();
        assert_eq!(evens, 3);
        assert_eq!(q.out_heads(7), vec![1, 8, 10]);
        assert!(q.member(11).is_err());
    }

    #[test]
    fn clique_out_degree_floor() {
        let p = params(6, 3);
        for id in 0..p.node_count().unwrap() {
            let u = p.unrank(NodeId(id)).unwrap();
            let q = oriented_clique(&u, &p);
            assert!(q.out_degree(u.head()) >= (6 - 3) / 2);
        }
    }

    #[test]
    fn shortest_paths_in_example_clique() {
        let p = params(10, 5);
        let v = label(&[7, 2, 3, 4, 5], &p);
        let q = oriented_clique(&v, &p);
        assert_eq!(q.shortest_path(7, 10).unwrap(), vec![7, 10]);
        assert_eq!(q.shortest_path(7, 9).unwrap(), vec![7, 8, 9]);
        // the arc 1 -> 10 exists, so the shortest route is direct; the long
        // way around (1, 6, 9, 10) is the closing path of the lone 4-cycle
        assert_eq!(q.shortest_path(1, 10).unwrap(), vec![1, 10]);
        assert!(q.has_arc(1, 6) && q.has_arc(6, 9) && q.has_arc(9, 10));
        assert_eq!(q.shortest_path(10, 1).unwrap(), vec![10, 6, 7, 1]);

        // avoiding 8 forces the long way around
        let avoiding = q.shortest_path_avoiding(7, 9, 8);
        assert_eq!(avoiding, Some(vec![7, 1, 6, 9]));
        assert!(q.shortest_path(7, 11).is_err());
    }

    #[test]
    fn path_lengths_bounded_by_tail_parity() {
        for (n, k) in [(6, 4), (7, 4), (8, 3)] {
            let p = params(n, k);
            let tail_odd = (n - k) % 2 == 1;
            let u = p.unrank(NodeId(0)).unwrap();
            let q = oriented_clique(&u, &p);
            for &x in q.heads() {
                for &y in q.heads() {
                    if x == y {
                        continue;
                    }
                    let len = q.shortest_path(x, y).unwrap().len() - 1;
                    assert!(len <= if tail_odd { 3 } else { 2 });
                }
            }
        }
    }

    #[test]
    fn audit_all_cliques_of_small_instances() {
        for (n, k) in [(6, 4), (6, 3), (10, 5)] {
            let p = params(n, k);
            if p.node_count().unwrap() > 40000 {
                continue;
            }
            let mut audited = 0;
            for id in 0..p.node_count().unwrap() {
                let u = p.unrank(NodeId(id)).unwrap();
                // one canonical member per clique: smallest head
                let q = oriented_clique(&u, &p);
                if u.head() != q.heads()[0] {
                    continue;
                }
                let audit = audit_clique(&q);
                assert!(audit.passed(), "clique of {u} failed: {:?}", audit.failures);
                audited += 1;
            }
            assert_eq!(audited, p.node_count().unwrap() / p.clique_size());
        }
    }

    #[test]
    fn audit_detects_corruption() {
        let p = params(10, 5);
        let v = label(&[7, 2, 3, 4, 5], &p);
        let q = oriented_clique(&v, &p);
        // break alternation by duplicating a sign
        let mut signs = q.signs().to_vec();
        signs[1] = signs[0];
        let corrupted =
            OrientedClique::from_parts(q.heads().to_vec(), signs, q.arm().to_vec(), &p).unwrap();
        let audit = audit_clique(&corrupted);
        assert!(!audit.passed());
        assert!(!audit.sign_alternation_ok);
    }

    #[test]
    fn arc_list_format() {
        let p = params(5, 3);
        let mut buf = Vec::new();
        write_arc_list(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 120);
        let mut prev: Option<(NodeId, NodeId)> = None;
        for line in lines {
            let parts: Vec<&str> = line.split(' ').collect();
            let a = p.rank(&NodeLabel::parse(parts[0], &p).unwrap());
            let b = p.rank(&NodeLabel::parse(parts[1], &p).unwrap());
            if let Some(prev) = prev {
                assert!(prev < (a, b), "arc list not sorted");
            }
            prev = Some((a, b));
        }
    }
}
