//! The two relay strategies as pure decision functions.
//!
//! [`btmr_relay`] is plain controlled flooding: rebroadcast anything not seen
//! recently, as long as the hop budget allows. [`mam_handle`] layers a
//! reactive least-hop route on top: heartbeats from the Mobile-Hub update a
//! cached best neighbor and keep flooding through [`btmr_relay`], while every
//! other message is unicast to that neighbor.
//!
//! Neither function touches the network. They return [`RelayAction`]s that the
//! caller turns into transmissions.

use std::collections::VecDeque;

use crate::types::{Message, NodeId, SimTime, MAX_HOPS};

/// Bounded set of recently relayed message hashes with LRU eviction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelayCache {
    capacity: usize,
    // Most recently used at the back.
    entries: VecDeque<u64>,
}

impl RelayCache {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "relay cache capacity must be positive");
        RelayCache {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, hash: u64) -> bool {
        self.entries.contains(&hash)
    }

    /// Looks `hash` up and, on a hit, marks it most recently used.
    pub fn touch(&mut self, hash: u64) -> bool {
        match self.entries.iter().position(|&h| h == hash) {
            Some(i) => {
                let h = self.entries.remove(i).expect("index in bounds");
                self.entries.push_back(h);
                true
            }
            None => false,
        }
    }

    /// Records `hash` as most recently used, evicting the oldest entry if full.
    pub fn insert(&mut self, hash: u64) {
        if self.touch(hash) {
            return;
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(hash);
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Hashes from least to most recently used.
    pub fn iter(&self) -> impl Iterator<Item = &u64> {
        self.entries.iter()
    }
}

/// Per-node MAM route cache.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MamState {
    pub best_node: Option<NodeId>,
    pub best_hops: u8,
    pub expiry: SimTime,
    pub delta_ms: u64,
}

impl MamState {
    pub fn new(delta_ms: u64) -> Self {
        MamState {
            best_node: None,
            best_hops: 0,
            expiry: SimTime::ZERO,
            delta_ms,
        }
    }

    pub fn reset(&mut self) {
        *self = MamState::new(self.delta_ms);
    }

    pub fn is_expired(&self, now: SimTime) -> bool {
        now > self.expiry
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DropReason {
    /// The relay cache already holds the message hash.
    RecentlyRelayed,
    /// Forwarding would push the hop count past [`MAX_HOPS`].
    HopLimit,
    /// MAM has no best neighbor toward the hub yet.
    NoRoute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelayAction {
    Broadcast(Message),
    Unicast(NodeId, Message),
    Drop(DropReason),
}

impl RelayAction {
    pub fn message(&self) -> Option<&Message> {
        match self {
            RelayAction::Broadcast(m) | RelayAction::Unicast(_, m) => Some(m),
            RelayAction::Drop(_) => None,
        }
    }
}

/// Controlled-flooding relay decision for `msg` arriving at node `me`.
pub fn btmr_relay(cache: &mut RelayCache, me: NodeId, msg: &Message) -> RelayAction {
    let hash = msg.relay_hash();
    let recently_relayed = cache.touch(hash);
    if recently_relayed {
        return RelayAction::Drop(DropReason::RecentlyRelayed);
    }
    if msg.hops >= MAX_HOPS {
        return RelayAction::Drop(DropReason::HopLimit);
    }
    cache.insert(hash);
    RelayAction::Broadcast(msg.forwarded_by(me))
}

/// MAM decision for `msg` arriving at node `me` at time `now`.
///
/// Always returns exactly one action; the list shape leaves room for the
/// composed heartbeat path.
pub fn mam_handle(
    state: &mut MamState,
    now: SimTime,
    cache: &mut RelayCache,
    me: NodeId,
    msg: &Message,
) -> Vec<RelayAction> {
    if !msg.kind.is_discovery() {
        let action = match state.best_node {
            None => RelayAction::Drop(DropReason::NoRoute),
            // same hop cap as flooding
            Some(_) if msg.hops >= MAX_HOPS => RelayAction::Drop(DropReason::HopLimit),
            Some(best) => RelayAction::Unicast(best, msg.forwarded_by(me)),
        };
        return vec![action];
    }

    if state.is_expired(now) || msg.hops < state.best_hops {
        state.best_node = Some(msg.sender);
        state.best_hops = msg.hops;
        state.expiry = now.after(state.delta_ms);
    }
    vec![btmr_relay(cache, me, msg)]
}

/// Routing state one node carries for both strategies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingState {
    pub mam: MamState,
    pub cache: RelayCache,
}

impl RoutingState {
    pub fn new(delta_ms: u64, cache_size: usize) -> Self {
        RoutingState {
            mam: MamState::new(delta_ms),
            cache: RelayCache::new(cache_size),
        }
    }

    /// Returns MAM state to its initial values and empties the relay cache.
    pub fn reset(&mut self) {
        self.mam.reset();
        self.cache.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::MessageKind;

    const ME: NodeId = NodeId(1);
    const DELTA: u64 = 100_000;

    fn data(origin: u16, seq: u32, hops: u8) -> Message {
        Message {
            hops,
            sender: NodeId(origin),
            ..Message::originate(MessageKind::Data, NodeId(origin), seq, vec![0xD0])
        }
    }

    fn heartbeat(sender: u16, seq: u32, hops: u8) -> Message {
        Message {
            hops,
            sender: NodeId(sender),
            ..Message::originate(MessageKind::Heartbeat, NodeId(0), seq, vec![])
        }
    }

    // --- BTM-R ---

    #[test]
    fn btmr_first_relay_broadcasts_one_hop_further() {
        let mut cache = RelayCache::new(20);
        let m = data(5, 0, 0);
        match btmr_relay(&mut cache, ME, &m) {
            RelayAction::Broadcast(out) => {
                assert_eq!(out.hops, 1);
                assert_eq!(out.sender, ME);
                assert_eq!(out.key(), m.key());
            }
            other => panic!("expected broadcast, got {other:?}"),
        }
        assert!(cache.contains(m.relay_hash()));
    }

    #[test]
    fn btmr_drops_at_hop_cap() {
        let mut cache = RelayCache::new(20);
        let m = data(5, 0, 127);
        assert_eq!(
            btmr_relay(&mut cache, ME, &m),
            RelayAction::Drop(DropReason::HopLimit)
        );
        assert!(cache.is_empty(), "a capped message is not cached");
    }

    #[test]
    fn btmr_relays_at_126_to_exactly_127() {
        let mut cache = RelayCache::new(20);
        let out = btmr_relay(&mut cache, ME, &data(5, 0, 126));
        assert_eq!(out.message().unwrap().hops, 127);
    }

    #[test]
    fn btmr_second_copy_is_dropped() {
        let mut cache = RelayCache::new(20);
        let m = data(5, 0, 0);
        assert!(matches!(
            btmr_relay(&mut cache, ME, &m),
            RelayAction::Broadcast(_)
        ));
        let again = Message {
            hops: 3,
            sender: NodeId(9),
            ..m.clone()
        };
        assert_eq!(
            btmr_relay(&mut cache, ME, &again),
            RelayAction::Drop(DropReason::RecentlyRelayed)
        );
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn btmr_cache_hit_wins_over_hop_cap() {
        let mut cache = RelayCache::new(20);
        let m = data(5, 0, 0);
        btmr_relay(&mut cache, ME, &m);
        let capped = Message { hops: 127, ..m };
        assert_eq!(
            btmr_relay(&mut cache, ME, &capped),
            RelayAction::Drop(DropReason::RecentlyRelayed)
        );
    }

    #[test]
    fn btmr_evicted_message_relays_again() {
        // capacity 2: m1 m2 m3 leaves {m2, m3}; m1 is fresh again.
        let mut cache = RelayCache::new(2);
        let (m1, m2, m3) = (data(5, 1, 0), data(5, 2, 0), data(5, 3, 0));
        for m in [&m1, &m2, &m3] {
            assert!(matches!(
                btmr_relay(&mut cache, ME, m),
                RelayAction::Broadcast(_)
            ));
        }
        assert!(!cache.contains(m1.relay_hash()));
        assert!(matches!(
            btmr_relay(&mut cache, ME, &m1),
            RelayAction::Broadcast(_)
        ));
        let order: Vec<u64> = cache.iter().copied().collect();
        assert_eq!(order, vec![m3.relay_hash(), m1.relay_hash()]);
    }

    #[test]
    fn lru_touch_on_hit_protects_entry() {
        // capacity 2: m1 m2, re-see m1 (touch), m3 evicts m2 rather than m1.
        let mut cache = RelayCache::new(2);
        let (m1, m2, m3) = (data(5, 1, 0), data(5, 2, 0), data(5, 3, 0));
        btmr_relay(&mut cache, ME, &m1);
        btmr_relay(&mut cache, ME, &m2);
        assert_eq!(
            btmr_relay(&mut cache, ME, &m1),
            RelayAction::Drop(DropReason::RecentlyRelayed)
        );
        btmr_relay(&mut cache, ME, &m3);
        assert!(cache.contains(m1.relay_hash()));
        assert!(!cache.contains(m2.relay_hash()));
    }

    // --- MAM ---

    #[test]
    fn mam_initial_state_accepts_first_heartbeat() {
        let mut st = MamState::new(DELTA);
        let mut cache = RelayCache::new(20);
        let acts = mam_handle(&mut st, SimTime(1), &mut cache, ME, &heartbeat(7, 0, 2));
        assert_eq!(st.best_node, Some(NodeId(7)));
        assert_eq!(st.best_hops, 2);
        assert_eq!(st.expiry, SimTime(1 + DELTA));
        assert_eq!(acts.len(), 1);
        assert_eq!(acts[0].message().unwrap().hops, 3);
        assert!(matches!(acts[0], RelayAction::Broadcast(_)));
    }

    #[test]
    fn mam_keeps_better_route_before_expiry() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            best_hops: 2,
            expiry: SimTime(5000),
            delta_ms: DELTA,
        };
        let before = st.clone();
        let mut cache = RelayCache::new(20);
        let acts = mam_handle(&mut st, SimTime(1000), &mut cache, ME, &heartbeat(9, 0, 5));
        assert_eq!(st, before);
        assert!(matches!(acts[..], [RelayAction::Broadcast(_)]));
    }

    #[test]
    fn mam_equal_hops_does_not_switch() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            best_hops: 2,
            expiry: SimTime(5000),
            delta_ms: DELTA,
        };
        let before = st.clone();
        let mut cache = RelayCache::new(20);
        mam_handle(&mut st, SimTime(1000), &mut cache, ME, &heartbeat(9, 0, 2));
        assert_eq!(st, before);
    }

    #[test]
    fn mam_fewer_hops_switches_before_expiry() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            best_hops: 4,
            expiry: SimTime(5000),
            delta_ms: DELTA,
        };
        let mut cache = RelayCache::new(20);
        mam_handle(&mut st, SimTime(1000), &mut cache, ME, &heartbeat(9, 0, 1));
        assert_eq!(st.best_node, Some(NodeId(9)));
        assert_eq!(st.best_hops, 1);
        assert_eq!(st.expiry, SimTime(1000 + DELTA));
    }

    #[test]
    fn mam_expired_route_takes_next_sender() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            best_hops: 2,
            expiry: SimTime(5000),
            delta_ms: DELTA,
        };
        let mut cache = RelayCache::new(20);
        mam_handle(&mut st, SimTime(6000), &mut cache, ME, &heartbeat(9, 0, 5));
        assert_eq!(st.best_node, Some(NodeId(9)));
        assert_eq!(st.best_hops, 5);
        assert_eq!(st.expiry, SimTime(6000 + DELTA));
    }

    #[test]
    fn mam_expiry_boundary_is_strict() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            best_hops: 2,
            expiry: SimTime(5000),
            delta_ms: DELTA,
        };
        let mut cache = RelayCache::new(20);
        mam_handle(&mut st, SimTime(5000), &mut cache, ME, &heartbeat(9, 0, 5));
        assert_eq!(st.best_node, Some(NodeId(7)));
    }

    #[test]
    fn mam_duplicate_heartbeat_still_updates_but_is_not_relayed() {
        let mut st = MamState::new(DELTA);
        let mut cache = RelayCache::new(20);
        mam_handle(&mut st, SimTime(10), &mut cache, ME, &heartbeat(7, 0, 3));
        let acts = mam_handle(&mut st, SimTime(20), &mut cache, ME, &heartbeat(8, 0, 1));
        assert_eq!(st.best_node, Some(NodeId(8)));
        assert_eq!(acts, vec![RelayAction::Drop(DropReason::RecentlyRelayed)]);
    }

    #[test]
    fn mam_data_unicasts_to_best_node() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            best_hops: 2,
            expiry: SimTime(5000),
            delta_ms: DELTA,
        };
        let before = st.clone();
        let mut cache = RelayCache::new(20);
        let m = data(4, 3, 1);
        let acts = mam_handle(&mut st, SimTime(100), &mut cache, ME, &m);
        assert_eq!(
            acts,
            vec![RelayAction::Unicast(NodeId(7), m.forwarded_by(ME))]
        );
        assert_eq!(acts[0].message().unwrap().hops, 2);
        assert_eq!(st, before);
        assert!(cache.is_empty(), "data path bypasses the relay cache");
    }

    #[test]
    fn mam_data_without_route_is_dropped() {
        let mut st = MamState::new(DELTA);
        let mut cache = RelayCache::new(20);
        let acts = mam_handle(&mut st, SimTime(100), &mut cache, ME, &data(4, 3, 0));
        assert_eq!(acts, vec![RelayAction::Drop(DropReason::NoRoute)]);
        assert_eq!(st, MamState::new(DELTA));
    }

    #[test]
    fn mam_data_path_respects_hop_cap() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            ..MamState::new(DELTA)
        };
        let mut cache = RelayCache::new(20);
        let acts = mam_handle(&mut st, SimTime(100), &mut cache, ME, &data(4, 3, 127));
        assert_eq!(acts, vec![RelayAction::Drop(DropReason::HopLimit)]);
    }

    #[test]
    fn mam_repeated_data_is_forwarded_every_time() {
        let mut st = MamState {
            best_node: Some(NodeId(7)),
            ..MamState::new(DELTA)
        };
        let mut cache = RelayCache::new(20);
        let m = data(4, 3, 0);
        let a = mam_handle(&mut st, SimTime(1), &mut cache, ME, &m);
        let b = mam_handle(&mut st, SimTime(2), &mut cache, ME, &m);
        assert_eq!(a, b);
    }

    // --- reset ---

    #[test]
    fn reset_restores_initial_state() {
        let mut rs = RoutingState::new(DELTA, 20);
        let hb = heartbeat(7, 0, 1);
        mam_handle(&mut rs.mam, SimTime(5), &mut rs.cache, ME, &hb);
        assert!(rs.mam.best_node.is_some());
        rs.reset();
        assert_eq!(rs, RoutingState::new(DELTA, 20));
        let acts = mam_handle(&mut rs.mam, SimTime(6), &mut rs.cache, ME, &data(4, 0, 0));
        assert_eq!(acts, vec![RelayAction::Drop(DropReason::NoRoute)]);
        assert!(matches!(
            btmr_relay(&mut rs.cache, ME, &hb),
            RelayAction::Broadcast(_)
        ));
        let once = {
            rs.reset();
            rs.clone()
        };
        rs.reset();
        assert_eq!(rs, once);
    }
}
