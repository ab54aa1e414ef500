//! Memoryless next-hop routing over the oriented (n,k)-star graph.
//!
//! The next node depends only on the pair (current, target). An external
//! head is pushed into the fundamental clique toward a displaced internal
//! value; an internal head travels star edges, settling into its target
//! position when the node sign permits, crossing to the opposite arm half
//! otherwise. When the head already equals the target head, a seeding move
//! restarts progress through the clique or the arm.

use std::fmt;

use crate::bounds::oriented_diameter_bound;
use crate::error::{Error, Result};
use crate::orientation::{oriented_clique, OrientedClique};
use crate::permutation::{alternating_cycles, arm_split, Direction, Permutation};
use crate::star_graph::{GraphParams, NodeLabel};

/// Largest symbol count the routing structures support (value sets are
/// 64-bit masks). Instances anywhere near this limit are far beyond
/// exhaustive verification anyway.
pub const MAX_ROUTING_SYMBOLS: usize = 63;

/// A set of values from `1..=63` backed by a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
pub struct ValueSet(u64);

impl ValueSet {
    pub fn empty() -> Self {
        ValueSet(0)
    }

    pub fn insert(&mut self, value: usize) {
        debug_assert!(value >= 1 && value <= MAX_ROUTING_SYMBOLS);
        self.0 |= 1 << value;
    }

    pub fn contains(&self, value: usize) -> bool {
        value >= 1 && value <= MAX_ROUTING_SYMBOLS && self.0 & (1 << value) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn min(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn union(&self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 & other.0)
    }

    pub fn minus(&self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 & !other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

impl FromIterator<usize> for ValueSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ValueSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The derived value sets for a (current, target) pair. Set names follow
/// the mnemonic scheme of the routing taxonomy: displaced/settled/unsettled,
/// split by the arm half they occupy in the current node and the half they
/// belong to in the target.
#[derive(Clone, Copy, Debug)]
pub struct MoveContext {
    /// I: values the target keeps in head or arm.
    pub internal: ValueSet,
    /// IA: internal values belonging to the target arm.
    pub arm_internal: ValueSet,
    /// DI: internal values sitting in the current tail.
    pub displaced_internal: ValueSet,
    /// E: values belonging to the target tail.
    pub external: ValueSet,
    /// DE: external values in the current head or arm.
    pub displaced_external: ValueSet,
    /// DEA: external values in the current arm.
    pub displaced_external_arm: ValueSet,
    /// DEL: external values in the current left half.
    pub displaced_external_left: ValueSet,
    /// DER: external values in the current right half.
    pub displaced_external_right: ValueSet,
    /// S: values already at their target position.
    pub settled: ValueSet,
    /// SL: settled values belonging to the target left half.
    pub settled_left: ValueSet,
    /// SR: settled values belonging to the target right half.
    pub settled_right: ValueSet,
    /// U: internal values at a wrong position.
    pub unsettled: ValueSet,
    /// ULL: unsettled, current left half, target left half.
    pub unsettled_left_left: ValueSet,
    /// URR: unsettled, current right half, target right half.
    pub unsettled_right_right: ValueSet,
    /// ULR: unsettled, current left half, target right half.
    pub unsettled_left_right: ValueSet,
    /// URL: unsettled, current right half, target left half.
    pub unsettled_right_left: ValueSet,
}

impl MoveContext {
    /// Displaced values still in the left half: ULL together with DEL.
    pub fn displaced_left(&self) -> ValueSet {
        self.unsettled_left_left.union(self.displaced_external_left)
    }

    /// Displaced values still in the right half: URR together with DER.
    pub fn displaced_right(&self) -> ValueSet {
        self.unsettled_right_right
            .union(self.displaced_external_right)
    }
}

fn values_at(p: &Permutation, lo: usize, hi: usize) -> ValueSet {
    (lo..=hi).map(|pos| p.image(pos)).collect()
}

fn check_pair(c: &Permutation, t: &Permutation, k: usize) -> Result<()> {
    if c.len() != t.len() {
        return Err(Error::MismatchedParams(format!(
            "nodes on {} and {} symbols",
            c.len(),
            t.len()
        )));
    }
    if c.len() > MAX_ROUTING_SYMBOLS {
        return Err(Error::TooLarge(format!(
            "router supports n <= {MAX_ROUTING_SYMBOLS}, got n = {}",
            c.len()
        )));
    }
    if k < 1 || k >= c.len() {
        return Err(Error::MismatchedParams(format!(
            "k = {k} incompatible with n = {}",
            c.len()
        )));
    }
    Ok(())
}

/// Builds the full set taxonomy for extended labels `c` and `t`.
pub fn move_context(c: &Permutation, t: &Permutation, k: usize) -> Result<MoveContext> {
    check_pair(c, t, k)?;
    let n = c.len();
    let mid = arm_split(k);

    let internal = values_at(t, 1, k);
    let arm_internal = values_at(t, 2, k);
    let external = values_at(t, k + 1, n);
    let tail_c = values_at(c, k + 1, n);
    let head_arm_c = values_at(c, 1, k);
    let arm_c = values_at(c, 2, k);
    let left_c = values_at(c, 2, mid);
    let right_c = values_at(c, mid + 1, k);
    let left_t = values_at(t, 2, mid);
    let right_t = values_at(t, mid + 1, k);

    let mut settled = ValueSet::empty();
    let mut unsettled = ValueSet::empty();
    for pos in 1..=k {
        let v = c.image(pos);
        if internal.contains(v) {
            if v == t.image(pos) {
                settled.insert(v);
            } else {
                unsettled.insert(v);
            }
        }
    }

    Ok(MoveContext {
        internal,
        arm_internal,
        displaced_internal: internal.intersect(tail_c),
        external,
        displaced_external: external.intersect(head_arm_c),
        displaced_external_arm: external.intersect(arm_c),
        displaced_external_left: external.intersect(left_c),
        displaced_external_right: external.intersect(right_c),
        settled,
        settled_left: settled.intersect(left_t),
        settled_right: settled.intersect(right_t),
        unsettled,
        unsettled_left_left: unsettled.intersect(left_c).intersect(left_t),
        unsettled_right_right: unsettled.intersect(right_c).intersect(right_t),
        unsettled_left_right: unsettled.intersect(left_c).intersect(right_t),
        unsettled_right_left: unsettled.intersect(right_c).intersect(left_t),
    })
}

/// Sub-case of a clique move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliqueCase {
    /// 1: an out-neighbour head already belongs to the target arm.
    DirectArm,
    /// 2.1: first hop toward a displaced arm value, avoiding the target head.
    AvoidTargetHead,
    /// 2.2: first hop toward a displaced arm value through the target head.
    ViaTargetHead,
    /// 3: no displaced arm value remains; head straight for the target head.
    ToTargetHead,
}

/// Sub-case of a crossing star move, in ladder order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossingCase {
    /// 2.1: displaced value in the active half, outside the head's cycle.
    DisplacedOutsideCycle,
    /// 2.2: displaced value met first traversing the head's cycle backward.
    DisplacedInCycle,
    /// 2.3: a settled value is unsettled.
    UnsettleSettled,
    /// 2.4: crossed-back value outside the cycle, on an alternating cycle.
    CrossBackAlternating,
    /// 2.5: crossed-back value outside the cycle.
    CrossBackOutsideCycle,
    /// 2.6: any crossed-back value.
    CrossBackAny,
    /// 2.7: the target head is the only value left in the active half.
    TargetHeadSlot,
}

/// Sub-case of a seeding clique move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeedCliqueCase {
    /// 1: an out-neighbour head is an internal value.
    Direct,
    /// 2: first hop of a clique path toward a displaced internal value.
    ViaExternal,
}

/// Sub-case of a seeding star move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeedStarCase {
    /// 1: no half-preserving unsettled values remain.
    AllCrossed,
    /// 2: first non-empty pool in priority order.
    Priority,
}

/// Classification of one routing move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Clique(CliqueCase),
    StarSettling,
    StarCrossing(CrossingCase),
    SeedClique(SeedCliqueCase),
    SeedStar(SeedStarCase),
}

impl MoveKind {
    pub fn is_star(&self) -> bool {
        matches!(self, MoveKind::StarSettling | MoveKind::StarCrossing(_))
    }

    pub fn is_clique(&self) -> bool {
        matches!(self, MoveKind::Clique(_))
    }

    pub fn is_seed(&self) -> bool {
        matches!(self, MoveKind::SeedClique(_) | MoveKind::SeedStar(_))
    }

    /// Wire name of the move family.
    pub fn label(&self) -> &'static str {
        match self {
            MoveKind::Clique(_) => "clique_move",
            MoveKind::StarSettling => "star_settling",
            MoveKind::StarCrossing(_) => "star_crossing",
            MoveKind::SeedClique(_) => "seed_clique",
            MoveKind::SeedStar(_) => "seed_star",
        }
    }

    /// Wire name of the sub-case.
    pub fn case_label(&self) -> &'static str {
        match self {
            MoveKind::Clique(CliqueCase::DirectArm) => "1",
            MoveKind::Clique(CliqueCase::AvoidTargetHead) => "2.1",
            MoveKind::Clique(CliqueCase::ViaTargetHead) => "2.2",
            MoveKind::Clique(CliqueCase::ToTargetHead) => "3",
            MoveKind::StarSettling => "1",
            MoveKind::StarCrossing(CrossingCase::DisplacedOutsideCycle) => "2.1",
            MoveKind::StarCrossing(CrossingCase::DisplacedInCycle) => "2.2",
            MoveKind::StarCrossing(CrossingCase::UnsettleSettled) => "2.3",
            MoveKind::StarCrossing(CrossingCase::CrossBackAlternating) => "2.4",
            MoveKind::StarCrossing(CrossingCase::CrossBackOutsideCycle) => "2.5",
            MoveKind::StarCrossing(CrossingCase::CrossBackAny) => "2.6",
            MoveKind::StarCrossing(CrossingCase::TargetHeadSlot) => "2.7",
            MoveKind::SeedClique(SeedCliqueCase::Direct) => "1",
            MoveKind::SeedClique(SeedCliqueCase::ViaExternal) => "2",
            MoveKind::SeedStar(SeedStarCase::AllCrossed) => "1",
            MoveKind::SeedStar(SeedStarCase::Priority) => "2",
        }
    }
}

fn clique_of(c: &Permutation, k: usize, params: &GraphParams) -> OrientedClique {
    oriented_clique(&NodeLabel::from_extended(c, k), params)
}

fn swap_with_tail(c: &Permutation, value: usize, k: usize) -> (Permutation, usize) {
    let pos = c.position_of(value);
    debug_assert!(pos > k, "clique hop must swap with a tail position");
    let next = c
        .apply_transposition(1, pos)
        .expect("positions validated")
        .lead(k);
    (next, pos)
}

fn swap_with_arm(c: &Permutation, value: usize, k: usize) -> (Permutation, usize) {
    let pos = c.position_of(value);
    debug_assert!(pos >= 2 && pos <= k, "star hop must swap with an arm position");
    let next = c.apply_transposition(1, pos).expect("positions validated");
    (next, pos)
}

/// Seeding clique move: head equals the target head but external values
/// remain in the arm. Hops into the clique, toward a displaced internal
/// value if none is directly reachable.
pub fn seed_clique(
    c: &Permutation,
    t: &Permutation,
    params: &GraphParams,
) -> Result<(Permutation, SeedCliqueCase, usize)> {
    let k = params.k();
    let ctx = move_context(c, t, k)?;
    if c.image(1) != t.image(1) || ctx.displaced_external_arm.is_empty() {
        return Err(Error::RouterInvariant(
            "seed_clique needs matching heads and external arm values".into(),
        ));
    }
    let clique = clique_of(c, k, params);
    let head = c.image(1);
    let out: ValueSet = clique.out_heads(head).into_iter().collect();

    if let Some(y) = out.intersect(ctx.internal).min() {
        let (next, pos) = swap_with_tail(c, y, k);
        return Ok((next, SeedCliqueCase::Direct, pos));
    }

    // take the first hop of a shortest clique path to some displaced
    // internal value
    let mut best: Option<usize> = None;
    for z in ctx.displaced_internal.iter() {
        let path = clique.shortest_path(head, z)?;
        debug_assert!(path.len() >= 3, "distance-1 targets belong to case 1");
        let y = path[1];
        best = Some(best.map_or(y, |b: usize| b.min(y)));
    }
    let y = best.ok_or_else(|| {
        Error::RouterInvariant("seed_clique found no displaced internal value".into())
    })?;
    let (next, pos) = swap_with_tail(c, y, k);
    Ok((next, SeedCliqueCase::ViaExternal, pos))
}

/// Seeding star move: head equals the target head and the arm holds only
/// internal values. Swaps the head into the active half of the arm.
pub fn seed_star(
    c: &Permutation,
    t: &Permutation,
    params: &GraphParams,
) -> Result<(Permutation, SeedStarCase, usize)> {
    let k = params.k();
    let ctx = move_context(c, t, k)?;
    if c.image(1) != t.image(1) || !ctx.displaced_external_arm.is_empty() {
        return Err(Error::RouterInvariant(
            "seed_star needs matching heads and a fully internal arm".into(),
        ));
    }
    if c == t {
        return Err(Error::RouterInvariant("seed_star called at the target".into()));
    }
    let even = c.sign().is_even();
    let (cross_pool, priority) = if even {
        (
            ctx.unsettled_left_right,
            [ctx.unsettled_left_left, ctx.settled_left, ctx.unsettled_left_right],
        )
    } else {
        (
            ctx.unsettled_right_left,
            [ctx.unsettled_right_right, ctx.settled_right, ctx.unsettled_right_left],
        )
    };
    let (y, case) = if ctx.unsettled_left_left.len() + ctx.unsettled_right_right.len() == 0 {
        let y = cross_pool.min().ok_or_else(|| {
            Error::RouterInvariant("seed_star case 1 pool empty implies current == target".into())
        })?;
        (y, SeedStarCase::AllCrossed)
    } else {
        let y = priority
            .iter()
            .find_map(|pool| pool.min())
            .ok_or_else(|| Error::RouterInvariant("seed_star priority pools all empty".into()))?;
        (y, SeedStarCase::Priority)
    };
    let (next, pos) = swap_with_arm(c, y, k);
    Ok((next, case, pos))
}

/// Clique move: the head is an external value. Hands it to the clique while
/// drawing a displaced internal value (or finally the target head) out of
/// the tail along a shortest clique path.
pub fn clique_move(
    c: &Permutation,
    t: &Permutation,
    params: &GraphParams,
) -> Result<(Permutation, CliqueCase, usize)> {
    let k = params.k();
    let ctx = move_context(c, t, k)?;
    let head = c.image(1);
    if !ctx.external.contains(head) {
        return Err(Error::RouterInvariant(
            "clique_move needs an external head".into(),
        ));
    }
    let clique = clique_of(c, k, params);
    let out: ValueSet = clique.out_heads(head).into_iter().collect();
    let tail_c = values_at(c, k + 1, c.len());
    let arm_in_reach = ctx.arm_internal.intersect(out);
    let arm_in_tail = ctx.arm_internal.intersect(tail_c);

    if let Some(y) = arm_in_reach.min() {
        let (next, pos) = swap_with_tail(c, y, k);
        return Ok((next, CliqueCase::DirectArm, pos));
    }

    let target_head = t.image(1);
    if !arm_in_tail.is_empty() {
        let target_in_clique = tail_c.contains(target_head);
        // prefer a shortest path that never visits the target head
        for z in arm_in_tail.iter() {
            let full = clique.shortest_path(head, z)?;
            if !target_in_clique {
                let (next, pos) = swap_with_tail(c, full[1], k);
                return Ok((next, CliqueCase::AvoidTargetHead, pos));
            }
            if let Some(avoiding) = clique.shortest_path_avoiding(head, z, target_head) {
                if avoiding.len() == full.len() {
                    let (next, pos) = swap_with_tail(c, avoiding[1], k);
                    return Ok((next, CliqueCase::AvoidTargetHead, pos));
                }
            }
        }
        let z = arm_in_tail.min().expect("non-empty");
        let path = clique.shortest_path(head, z)?;
        let (next, pos) = swap_with_tail(c, path[1], k);
        return Ok((next, CliqueCase::ViaTargetHead, pos));
    }

    // no arm value left in the tail forces the target head to be there
    if !tail_c.contains(target_head) {
        return Err(Error::RouterInvariant(format!(
            "external head {head} with no displaced arm value, yet target head \
             {target_head} is not in the tail"
        )));
    }
    let path = clique.shortest_path(head, target_head)?;
    let (next, pos) = swap_with_tail(c, path[1], k);
    Ok((next, CliqueCase::ToTargetHead, pos))
}

/// Star move: the head is an internal value other than the target head.
/// Settles it when the node sign allows reaching its target position,
/// otherwise crosses it into the active half, displacing a value chosen by
/// the priority ladder.
pub fn star_move(
    c: &Permutation,
    t: &Permutation,
    params: &GraphParams,
) -> Result<(Permutation, MoveKind, usize)> {
    let k = params.k();
    let ctx = move_context(c, t, k)?;
    let head = c.image(1);
    if !ctx.internal.contains(head) || head == t.image(1) {
        return Err(Error::RouterInvariant(
            "star_move needs an internal, non-target head".into(),
        ));
    }
    let even = c.sign().is_even();
    let mid = arm_split(k);
    let (settle_half_t, active_half_c, displaced, settled_pool, cross_pool) = if even {
        (
            values_at(t, 2, mid),
            values_at(c, 2, mid),
            ctx.displaced_left(),
            ctx.settled_left,
            ctx.unsettled_left_right,
        )
    } else {
        (
            values_at(t, mid + 1, k),
            values_at(c, mid + 1, k),
            ctx.displaced_right(),
            ctx.settled_right,
            ctx.unsettled_right_left,
        )
    };

    if settle_half_t.contains(head) {
        let pos = t.position_of(head);
        let next = c.apply_transposition(1, pos).expect("arm position");
        return Ok((next, MoveKind::StarSettling, pos));
    }

    let cycle: ValueSet = c.cycle_decompose().cycle_of(head).iter().copied().collect();

    let (y, case) = if let Some(y) = displaced.minus(cycle).min() {
        (y, CrossingCase::DisplacedOutsideCycle)
    } else if !displaced.is_empty() {
        let y = c
            .traverse_cycle(head, Direction::Backward)
            .into_iter()
            .skip(1)
            .find(|v| displaced.contains(*v))
            .expect("displaced values all lie in the head's cycle");
        (y, CrossingCase::DisplacedInCycle)
    } else if let Some(y) = settled_pool.min() {
        (y, CrossingCase::UnsettleSettled)
    } else if let Some(y) = {
        let alternating: ValueSet = alternating_cycles(c, t, k)?
            .into_iter()
            .flatten()
            .collect();
        cross_pool.minus(cycle).intersect(alternating).min()
    } {
        (y, CrossingCase::CrossBackAlternating)
    } else if let Some(y) = cross_pool.minus(cycle).min() {
        (y, CrossingCase::CrossBackOutsideCycle)
    } else if let Some(y) = cross_pool.min() {
        (y, CrossingCase::CrossBackAny)
    } else if active_half_c.contains(t.image(1)) {
        // the active half holds only the target head; crossing onto it is
        // the one legal star move left
        debug_assert_eq!(active_half_c.len(), 1);
        (t.image(1), CrossingCase::TargetHeadSlot)
    } else {
        return Err(Error::RouterInvariant(
            "crossing ladder exhausted with no eligible value".into(),
        ));
    };
    let (next, pos) = swap_with_arm(c, y, k);
    Ok((next, MoveKind::StarCrossing(case), pos))
}

/// One routing step on extended labels; pure in `(c, t)`.
pub fn route_step(
    c: &Permutation,
    t: &Permutation,
    params: &GraphParams,
) -> Result<(Permutation, MoveKind, usize)> {
    params.check_routable()?;
    let k = params.k();
    check_pair(c, t, k)?;
    if c == t {
        return Err(Error::RouteStepOnTarget);
    }
    let ctx = move_context(c, t, k)?;
    let head = c.image(1);
    if head == t.image(1) {
        if !ctx.displaced_external_arm.is_empty() {
            let (next, case, pos) = seed_clique(c, t, params)?;
            Ok((next, MoveKind::SeedClique(case), pos))
        } else {
            let (next, case, pos) = seed_star(c, t, params)?;
            Ok((next, MoveKind::SeedStar(case), pos))
        }
    } else if ctx.external.contains(head) {
        let (next, case, pos) = clique_move(c, t, params)?;
        Ok((next, MoveKind::Clique(case), pos))
    } else {
        star_move(c, t, params)
    }
}

/// One executed move: the node arrived at, how, and through which position.
#[derive(Clone, Debug)]
pub struct RouteStep {
    pub node: NodeLabel,
    pub kind: MoveKind,
    /// Position swapped with the head in the previous node (before tail
    /// re-sorting for clique hops).
    pub position: usize,
    /// Head value of the arrived node.
    pub head: usize,
}

/// Route phases, delimited by how the displaced-half sets evolve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Transient,
    SymmetricCrossing,
    AsymmetricCrossing,
    Settling,
}

/// Complete record of one routed pair.
#[derive(Clone, Debug)]
pub struct RouteTrace {
    pub n: usize,
    pub k: usize,
    pub source: NodeLabel,
    pub target: NodeLabel,
    pub steps: Vec<RouteStep>,
    /// Move counters by family.
    pub clique_moves: usize,
    pub star_moves: usize,
    pub seed_clique_moves: usize,
    pub seed_star_moves: usize,
    /// Last move of the transient phase.
    pub phase1_end: usize,
    /// First index at which one displaced half is exhausted.
    pub phase2_end: usize,
    /// First index at which both displaced halves are exhausted.
    pub phase3_end: usize,
    /// First index at which no internal value remains in the tail.
    pub displaced_internal_cleared: usize,
    /// Alternating-cycle count at each visited node (length moves + 1).
    pub alternating_cycles: Vec<usize>,
    /// |displaced left| at each visited node.
    pub displaced_left: Vec<usize>,
    /// |displaced right| at each visited node.
    pub displaced_right: Vec<usize>,
    /// |displaced internal| at each visited node.
    pub displaced_internal: Vec<usize>,
}

impl RouteTrace {
    /// Number of moves taken.
    pub fn moves(&self) -> usize {
        self.steps.len()
    }

    /// Phase of move `m` (`0 <= m <= moves()`).
    pub fn phase_of(&self, m: usize) -> Result<Phase> {
        if m > self.moves() {
            return Err(Error::PositionOutOfRange {
                position: m,
                n: self.moves(),
            });
        }
        Ok(if m <= self.phase1_end {
            Phase::Transient
        } else if m <= self.phase2_end {
            Phase::SymmetricCrossing
        } else if m <= self.phase3_end {
            Phase::AsymmetricCrossing
        } else {
            Phase::Settling
        })
    }

    /// Trace as JSON, schema: `{n, k, source, target, steps: [{node, move,
    /// case, i, head}], stats: {alpha, beta, gamma1, gamma2, m1, m2, m3,
    /// m_zd, m_L, chi}}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "source": self.source.to_string(),
            "target": self.target.to_string(),
            "steps": self.steps.iter().map(|s| serde_json::json!({
                "node": s.node.to_string(),
                "move": s.kind.label(),
                "case": s.kind.case_label(),
                "i": s.position,
                "head": s.head,
            })).collect::<Vec<_>>(),
            "stats": {
                "alpha": self.clique_moves,
                "beta": self.star_moves,
                "gamma1": self.seed_clique_moves,
                "gamma2": self.seed_star_moves,
                "m1": self.phase1_end,
                "m2": self.phase2_end,
                "m3": self.phase3_end,
                "m_zd": self.displaced_internal_cleared,
                "m_L": self.moves(),
                "chi": self.alternating_cycles,
            },
        })
    }
}

/// Routes from `s` to `t`, recording every move. `max_moves` defaults to
/// the closed-form diameter bound; exceeding the budget is an error.
pub fn route(
    s: &NodeLabel,
    t: &NodeLabel,
    params: &GraphParams,
    max_moves: Option<usize>,
) -> Result<RouteTrace> {
    params.check_routable()?;
    let (n, k) = (params.n(), params.k());
    let budget = match max_moves {
        Some(m) => m,
        None => oriented_diameter_bound(n, k)?,
    };
    let target = t.extended(params);
    let mut current = s.extended(params);
    check_pair(&current, &target, k)?;

    let mut steps = Vec::new();
    let mut chi = Vec::new();
    let mut dl = Vec::new();
    let mut dr = Vec::new();
    let mut di = Vec::new();
    let mut record = |p: &Permutation| -> Result<()> {
        let ctx = move_context(p, &target, k)?;
        chi.push(alternating_cycles(p, &target, k)?.len());
        dl.push(ctx.displaced_left().len());
        dr.push(ctx.displaced_right().len());
        di.push(ctx.displaced_internal.len());
        Ok(())
    };
    record(&current)?;

    let mut counts = [0usize; 4]; // clique, star, seed-clique, seed-star
    while current != target {
        if steps.len() == budget {
            return Err(Error::MoveBudgetExceeded { budget });
        }
        let (next, kind, position) = route_step(&current, &target, params)?;
        match kind {
            MoveKind::Clique(_) => counts[0] += 1,
            MoveKind::StarSettling | MoveKind::StarCrossing(_) => counts[1] += 1,
            MoveKind::SeedClique(_) => counts[2] += 1,
            MoveKind::SeedStar(_) => counts[3] += 1,
        }
        steps.push(RouteStep {
            node: NodeLabel::from_extended(&next, k),
            kind,
            position,
            head: next.image(1),
        });
        current = next;
        record(&current)?;
    }

    let moves = steps.len();
    let phase2_end = (0..=moves)
        .find(|&m| dl[m] == 0 || dr[m] == 0)
        .unwrap_or(moves);
    let phase3_end = (0..=moves)
        .find(|&m| dl[m] == 0 && dr[m] == 0)
        .unwrap_or(moves);
    let initial = dl[0] + dr[0];
    let mut phase1_end = 0;
    for m in 0..=phase2_end {
        if dl[m] + dr[m] == initial {
            phase1_end = m;
        } else {
            break;
        }
    }
    let displaced_internal_cleared = (0..=moves).find(|&m| di[m] == 0).unwrap_or(moves);

    Ok(RouteTrace {
        n,
        k,
        source: s.clone(),
        target: t.clone(),
        steps,
        clique_moves: counts[0],
        star_moves: counts[1],
        seed_clique_moves: counts[2],
        seed_star_moves: counts[3],
        phase1_end,
        phase2_end,
        phase3_end,
        displaced_internal_cleared,
        alternating_cycles: chi,
        displaced_left: dl,
        displaced_right: dr,
        displaced_internal: di,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star_graph::NodeId;

    fn params(n: usize, k: usize) -> GraphParams {
        GraphParams::new(n, k).unwrap()
    }

    fn label(symbols: &[usize], p: &GraphParams) -> NodeLabel {
        NodeLabel::new(symbols.to_vec(), p).unwrap()
    }

    fn set(values: &[usize]) -> ValueSet {
        values.iter().copied().collect()
    }

    #[test]
    fn value_set_basics() {
        let mut s = ValueSet::empty();
        assert!(s.is_empty());
        s.insert(5);
        s.insert(2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.min(), Some(2));
        assert!(s.contains(5) && !s.contains(3));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2, 5]);
        assert_eq!(s.union(set(&[3])).len(), 3);
        assert_eq!(s.intersect(set(&[5, 9])), set(&[5]));
        assert_eq!(s.minus(set(&[5])), set(&[2]));
    }

    #[test]
    fn context_at_target_is_clean() {
        let p = params(10, 5);
        let t = label(&[1, 2, 3, 4, 5], &p).extended(&p);
        let ctx = move_context(&t, &t, 5).unwrap();
        assert!(ctx.unsettled.is_empty());
        assert!(ctx.displaced_internal.is_empty());
        assert!(ctx.displaced_external.is_empty());
        assert_eq!(ctx.settled, set(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn context_example_pair() {
        let p = params(10, 5);
        let c = label(&[7, 2, 3, 4, 5], &p).extended(&p);
        let t = label(&[1, 2, 3, 4, 5], &p).extended(&p);
        let ctx = move_context(&c, &t, 5).unwrap();
        assert_eq!(ctx.internal, set(&[1, 2, 3, 4, 5]));
        assert_eq!(ctx.external, set(&[6, 7, 8, 9, 10]));
        assert_eq!(ctx.displaced_external, set(&[7]));
        assert_eq!(ctx.displaced_internal, set(&[1]));
        assert_eq!(ctx.settled, set(&[2, 3, 4, 5]));
        assert!(ctx.unsettled.is_empty());
        assert!(ctx.displaced_external_arm.is_empty());
        // redundant aliases hold by construction
        assert_eq!(ctx.arm_internal, set(&[2, 3, 4, 5]));
    }

    #[test]
    fn context_crossed_pair() {
        let t = Permutation::identity(6);
        let c = Permutation::from_images(vec![1, 4, 5, 2, 3, 6]).unwrap();
        let ctx = move_context(&c, &t, 5).unwrap();
        assert_eq!(ctx.unsettled_left_right, set(&[4, 5]));
        assert_eq!(ctx.unsettled_right_left, set(&[2, 3]));
        assert!(ctx.unsettled_left_left.is_empty());
        assert!(ctx.unsettled_right_right.is_empty());
        assert!(ctx.displaced_external_left.is_empty());
        assert!(ctx.displaced_external_right.is_empty());
    }

    #[test]
    fn context_partitions_internal_values() {
        let p = params(5, 3);
        let count = p.node_count().unwrap();
        for a in 0..count {
            let c = p.unrank(NodeId(a)).unwrap().extended(&p);
            for b in 0..count {
                let t = p.unrank(NodeId(b)).unwrap().extended(&p);
                let ctx = move_context(&c, &t, 3).unwrap();
                let rebuilt = ctx
                    .settled
                    .union(ctx.unsettled)
                    .union(ctx.displaced_internal);
                assert_eq!(rebuilt, ctx.internal);
                assert_eq!(
                    ctx.settled.len() + ctx.unsettled.len() + ctx.displaced_internal.len(),
                    3
                );
                assert_eq!(ctx.displaced_external.len(), ctx.displaced_internal.len());
            }
        }
    }

    #[test]
    fn single_clique_move_reaches_target() {
        let p = params(10, 5);
        let s = label(&[7, 2, 3, 4, 5], &p);
        let t = label(&[1, 2, 3, 4, 5], &p);
        let (next, kind, pos) =
            route_step(&s.extended(&p), &t.extended(&p), &p).unwrap();
        assert_eq!(kind, MoveKind::Clique(CliqueCase::ToTargetHead));
        assert_eq!(pos, 6);
        assert_eq!(next, t.extended(&p));

        let trace = route(&s, &t, &p, None).unwrap();
        assert_eq!(trace.moves(), 1);
        assert_eq!(trace.clique_moves, 1);
        assert_eq!(trace.displaced_internal_cleared, 1);
    }

    #[test]
    fn route_to_self_is_empty() {
        let p = params(5, 3);
        let s = label(&[3, 1, 2], &p);
        let trace = route(&s, &s, &p, None).unwrap();
        assert_eq!(trace.moves(), 0);
        assert_eq!(trace.alternating_cycles, vec![0]);
        assert!(route_step(&s.extended(&p), &s.extended(&p), &p).is_err());
    }

    #[test]
    fn forced_crossing_cascade_terminates() {
        // the arm of the source holds the target head as its only left value
        // at some point, forcing the final ladder rung
        let p = params(5, 3);
        let s = label(&[2, 1, 3], &p);
        let t = label(&[1, 2, 3], &p);
        let trace = route(&s, &t, &p, None).unwrap();
        let kinds: Vec<&str> = trace.steps.iter().map(|s| s.kind.case_label()).collect();
        assert_eq!(trace.moves(), 5);
        assert!(trace
            .steps
            .iter()
            .any(|s| s.kind == MoveKind::StarCrossing(CrossingCase::TargetHeadSlot)),
            "expected the target-head rung in {kinds:?}");
    }

    #[test]
    fn dispatch_and_arc_respect_exhaustive_small() {
        let p = params(5, 3);
        let count = p.node_count().unwrap();
        for a in 0..count {
            let c_label = p.unrank(NodeId(a)).unwrap();
            let c = c_label.extended(&p);
            let out: Vec<NodeLabel> = crate::orientation::out_neighbors(&c_label, &p)
                .into_iter()
                .map(|(v, _)| v)
                .collect();
            for b in 0..count {
                if a == b {
                    continue;
                }
                let t_label = p.unrank(NodeId(b)).unwrap();
                let t = t_label.extended(&p);
                let ctx = move_context(&c, &t, 3).unwrap();
                let (next, kind, _) = route_step(&c, &t, &p).unwrap();
                // the dispatch case matches the head classification
                let head = c.image(1);
                match kind {
                    MoveKind::SeedClique(_) => {
                        assert_eq!(head, t.image(1));
                        assert!(!ctx.displaced_external_arm.is_empty());
                    }
                    MoveKind::SeedStar(_) => {
                        assert_eq!(head, t.image(1));
                        assert!(ctx.displaced_external_arm.is_empty());
                    }
                    MoveKind::Clique(_) => assert!(ctx.external.contains(head)),
                    MoveKind::StarSettling | MoveKind::StarCrossing(_) => {
                        assert!(ctx.internal.contains(head) && head != t.image(1));
                    }
                }
                // every step travels an oriented arc
                let next_label = NodeLabel::from_extended(&next, 3);
                assert!(
                    out.contains(&next_label),
                    "step {c_label} -> {next_label} is not an out-arc"
                );
            }
        }
    }

    #[test]
    fn seed_moves_land_in_clique_or_active_half() {
        let p = params(5, 3);
        let count = p.node_count().unwrap();
        let mut seed_clique_seen = 0;
        let mut seed_star_seen = 0;
        for a in 0..count {
            let c = p.unrank(NodeId(a)).unwrap().extended(&p);
            for b in 0..count {
                if a == b {
                    continue;
                }
                let t = p.unrank(NodeId(b)).unwrap().extended(&p);
                if c.image(1) != t.image(1) {
                    continue;
                }
                let ctx = move_context(&c, &t, 3).unwrap();
                if !ctx.displaced_external_arm.is_empty() {
                    seed_clique_seen += 1;
                    let (next, _, pos) = seed_clique(&c, &t, &p).unwrap();
                    assert!(pos > 3, "seed clique swaps with the tail");
                    assert_eq!(&next.images()[1..3], &c.images()[1..3]);
                } else {
                    seed_star_seen += 1;
                    let (_, _, pos) = seed_star(&c, &t, &p).unwrap();
                    let mid = arm_split(3);
                    if c.sign().is_even() {
                        assert!(pos >= 2 && pos <= mid);
                    } else {
                        assert!(pos > mid && pos <= 3);
                    }
                }
            }
        }
        assert!(seed_clique_seen > 0 && seed_star_seen > 0);
    }

    #[test]
    fn memoryless_routes_are_reproducible() {
        let p = params(6, 3);
        let s = label(&[4, 6, 1], &p);
        let t = label(&[1, 2, 3], &p);
        let a = route(&s, &t, &p, None).unwrap();
        let b = route(&s, &t, &p, None).unwrap();
        assert_eq!(a.moves(), b.moves());
        for (x, y) in a.steps.iter().zip(b.steps.iter()) {
            assert_eq!(x.node, y.node);
            assert_eq!(x.kind, y.kind);
        }
    }

    #[test]
    fn move_budget_enforced() {
        let p = params(6, 3);
        let s = label(&[4, 6, 1], &p);
        let t = label(&[1, 2, 3], &p);
        let err = route(&s, &t, &p, Some(0)).unwrap_err();
        assert!(matches!(err, Error::MoveBudgetExceeded { budget: 0 }));
    }

    #[test]
    fn counters_sum_to_moves() {
        let p = params(6, 4);
        let count = p.node_count().unwrap();
        let t = p.unrank(NodeId(77)).unwrap();
        for a in (0..count).step_by(7) {
            let s = p.unrank(NodeId(a)).unwrap();
            let trace = route(&s, &t, &p, None).unwrap();
            assert_eq!(
                trace.clique_moves
                    + trace.star_moves
                    + trace.seed_clique_moves
                    + trace.seed_star_moves,
                trace.moves()
            );
            assert_eq!(trace.alternating_cycles.len(), trace.moves() + 1);
        }
    }

    #[test]
    fn phase_classification() {
        let p = params(6, 3);
        let s = label(&[4, 6, 1], &p);
        let t = label(&[1, 2, 3], &p);
        let trace = route(&s, &t, &p, None).unwrap();
        assert!(trace.phase1_end <= trace.phase2_end);
        assert!(trace.phase2_end <= trace.phase3_end);
        assert_eq!(trace.phase_of(0).unwrap(), Phase::Transient);
        assert_eq!(trace.phase_of(trace.moves()).unwrap(), Phase::Settling);
        assert!(trace.phase_of(trace.moves() + 1).is_err());

        // a pair with nothing displaced starts in the settling phase
        let s2 = label(&[2, 1, 3], &p);
        let trivial = route(&s2, &t, &p, None).unwrap();
        assert_eq!(trivial.phase1_end, 0);
        assert_eq!(trivial.phase2_end, 0);
        assert_eq!(trivial.phase3_end, 0);
    }

    #[test]
    fn trace_json_schema() {
        let p = params(10, 5);
        let s = label(&[7, 2, 3, 4, 5], &p);
        let t = label(&[1, 2, 3, 4, 5], &p);
        let json = route(&s, &t, &p, None).unwrap().to_json();
        assert_eq!(json["n"], 10);
        assert_eq!(json["source"], "7-2-3-4-5");
        assert_eq!(json["steps"][0]["move"], "clique_move");
        assert_eq!(json["steps"][0]["case"], "3");
        assert_eq!(json["steps"][0]["i"], 6);
        assert_eq!(json["steps"][0]["head"], 1);
        assert_eq!(json["stats"]["alpha"], 1);
        assert_eq!(json["stats"]["m_L"], 1);
        assert_eq!(json["stats"]["chi"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn router_rejects_oversized_symbol_space() {
        let p = params(70, 5);
        let c = p.unrank(NodeId(0)).unwrap().extended(&p);
        let t = p.unrank(NodeId(1)).unwrap().extended(&p);
        assert!(matches!(
            route_step(&c, &t, &p),
            Err(Error::TooLarge(_))
        ));
    }
}
