//! Deterministic discrete-event engine.
//!
//! A [`World`] owns every node, a single event queue and a seeded PRNG. Each
//! [`World::step`] pops one event, advances the clock to it and applies it.
//! Nodes hand received frames to the relay strategy they are currently
//! configured with and queue the resulting transmissions on their own bounded
//! transmit queue; the radio drains that queue one frame per `airtime_ms`.
//!
//! Same config and seed, same trace. Nothing depends on wall-clock time or on
//! hash-map iteration order.

mod queue;
mod topology;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use queue::{EventQueue, TxQueue};
pub use topology::{
    distance, hub_position, MobilityTrace, PlacedNode, Position, RadioModel, Topology,
};

use crate::commander::{Command, Verb};
use crate::config::{Algorithm, ConfigError, Role, ScenarioConfig};
use crate::metrics::{DedupTracker, HubTracker, IntervalSet, NodeStats, RunReport, TrackerError};
use crate::routing::{btmr_relay, mam_handle, DropReason, MamState, RelayAction, RoutingState};
use crate::types::{Message, MessageKey, MessageKind, NodeId, SimTime};

/// Payload code of a reachability probe carried in a Command message.
const PROBE_CODE: u8 = 0x10;
const STATS_PAYLOAD_LEN: usize = 21;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("hub ran out of dedup memory at {at}")]
    HubOutOfMemory { at: SimTime, source: TrackerError },
    #[error("scenario has no commander node")]
    NoCommander,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("the hub cannot be removed")]
    HubRemoval,
}

/// A frame waiting in a transmit queue. `dest` is set for unicasts.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub msg: Message,
    pub dest: Option<NodeId>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceEvent {
    Transmitted {
        at: SimTime,
        from: NodeId,
        dest: Option<NodeId>,
        msg: Message,
    },
    Delivered {
        at: SimTime,
        to: NodeId,
        msg: Message,
    },
}

#[derive(Clone, Debug)]
enum Event {
    Deliver { to: usize, msg: Message },
    Transmit(usize),
    GenerateData(usize),
    EmitHeartbeat,
    CommandArrival(Command),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Control {
    Verb(Verb),
    Probe,
}

impl Control {
    fn decode(payload: &[u8]) -> Option<Control> {
        match payload {
            [PROBE_CODE] => Some(Control::Probe),
            [code] => Verb::from_code(*code).map(Control::Verb),
            _ => None,
        }
    }
}

/// Statistics snapshot as carried by a StatsReport message.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatsEntry {
    pub algorithm: Algorithm,
    pub stats: NodeStats,
}

impl StatsEntry {
    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(STATS_PAYLOAD_LEN);
        out.push(self.algorithm.code());
        let s = &self.stats;
        for v in [s.generated, s.relayed, s.received, s.tx_dropped, s.restarts] {
            out.extend_from_slice(&(v.min(u32::MAX as u64) as u32).to_be_bytes());
        }
        out
    }

    fn decode(payload: &[u8]) -> Option<StatsEntry> {
        if payload.len() != STATS_PAYLOAD_LEN {
            return None;
        }
        let algorithm = Algorithm::from_code(payload[0])?;
        let field = |i: usize| {
            let at = 1 + 4 * i;
            u32::from_be_bytes(payload[at..at + 4].try_into().unwrap()) as u64
        };
        Some(StatsEntry {
            algorithm,
            stats: NodeStats {
                generated: field(0),
                relayed: field(1),
                received: field(2),
                tx_dropped: field(3),
                restarts: field(4),
            },
        })
    }
}

fn probe_payload(key: MessageKey) -> Vec<u8> {
    let mut out = key.origin.0.to_be_bytes().to_vec();
    out.extend_from_slice(&key.seq.to_be_bytes());
    out
}

/// Synthetic sensor reading: generation second and a 16-bit sample.
fn sensor_reading(node: NodeId, seq: u32, now: SimTime) -> Vec<u8> {
    let secs = (now.ms() / 1000).min(u32::MAX as u64) as u32;
    let sample = (u32::from(node.0) * 37 + seq * 11) % 4096;
    let mut out = secs.to_be_bytes().to_vec();
    out.extend_from_slice(&(sample as u16).to_be_bytes());
    out
}

#[derive(Clone, Debug)]
struct Node {
    id: NodeId,
    role: Role,
    home: Position,
    present: bool,
    algorithm: Algorithm,
    routing: RoutingState,
    txq: TxQueue<Frame>,
    tx_scheduled: bool,
    radio_free_at: SimTime,
    next_seq: u32,
    stats: NodeStats,
    // control messages already acted upon, per origin
    applied: BTreeMap<NodeId, IntervalSet>,
}

impl Node {
    fn take_seq(&mut self) -> u32 {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }
}

#[derive(Clone, Debug)]
struct Probe {
    key: MessageKey,
    prober: usize,
    acked: BTreeSet<NodeId>,
}

#[derive(Clone, Copy, Debug, Default)]
struct Totals {
    tx: u64,
    rx: u64,
    data_tx: u64,
    no_route: u64,
}

pub struct World {
    cfg: ScenarioConfig,
    now: SimTime,
    queue: EventQueue<Event>,
    inbox: VecDeque<Command>,
    nodes: Vec<Node>,
    index: BTreeMap<NodeId, usize>,
    hub: usize,
    commander: Option<usize>,
    hub_trace: MobilityTrace,
    radio: RadioModel,
    rng: ChaCha8Rng,
    tracker: HubTracker,
    stats_inbox: BTreeMap<NodeId, StatsEntry>,
    probe: Option<Probe>,
    totals: Totals,
    trace: Option<Vec<TraceEvent>>,
}

impl World {
    pub fn new(cfg: ScenarioConfig) -> Result<World, SimError> {
        cfg.validate()?;
        let nodes: Vec<Node> = cfg
            .nodes
            .iter()
            .map(|spec| Node {
                id: spec.id,
                role: spec.role,
                home: (spec.x, spec.y),
                present: true,
                algorithm: cfg.algorithm,
                routing: RoutingState::new(cfg.delta_ms, cfg.relay_cache_size),
                txq: TxQueue::new(cfg.tx_queue_capacity),
                tx_scheduled: false,
                radio_free_at: SimTime::ZERO,
                next_seq: 0,
                stats: NodeStats::default(),
                applied: BTreeMap::new(),
            })
            .collect();
        let index = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        let hub = nodes
            .iter()
            .position(|n| n.role == Role::Hub)
            .expect("validated");
        let commander = nodes.iter().position(|n| n.role == Role::Commander);
        let radio = RadioModel {
            range_m: cfg.radio.range_m(),
            per_link_loss_prob: cfg.loss_prob,
            latency_ms: cfg.latency_ms,
        };

        let mut world = World {
            now: SimTime::ZERO,
            queue: EventQueue::new(),
            inbox: VecDeque::new(),
            index,
            hub,
            commander,
            hub_trace: MobilityTrace::from_config(&cfg.mobility),
            radio,
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            tracker: HubTracker::new(cfg.hub_tracker, cfg.tracker_entry_limit),
            stats_inbox: BTreeMap::new(),
            probe: None,
            totals: Totals::default(),
            trace: None,
            nodes,
            cfg,
        };
        world.schedule_periodic(SimTime::ZERO, Event::EmitHeartbeat);
        let sensors: Vec<usize> = (0..world.nodes.len())
            .filter(|&i| world.nodes[i].role == Role::Sensor)
            .collect();
        for (k, i) in sensors.into_iter().enumerate() {
            let start = world.cfg.data_start_ms + k as u64 * world.cfg.data_stagger_ms;
            world.schedule_periodic(SimTime(start), Event::GenerateData(i));
        }
        Ok(world)
    }

    /// Starts recording every transmission and delivery.
    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn pending_events(&self) -> usize {
        self.queue.len()
    }

    pub fn hub_id(&self) -> NodeId {
        self.nodes[self.hub].id
    }

    pub fn commander_id(&self) -> Option<NodeId> {
        self.commander.map(|c| self.nodes[c].id)
    }

    /// Ids of nodes still part of the network, in scenario order.
    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| n.present)
            .map(|n| n.id)
            .collect()
    }

    fn idx(&self, id: NodeId) -> Result<usize, SimError> {
        self.index
            .get(&id)
            .copied()
            .ok_or(SimError::UnknownNode(id))
    }

    pub fn role_of(&self, id: NodeId) -> Result<Role, SimError> {
        Ok(self.nodes[self.idx(id)?].role)
    }

    pub fn algorithm_of(&self, id: NodeId) -> Result<Algorithm, SimError> {
        Ok(self.nodes[self.idx(id)?].algorithm)
    }

    pub fn mam_state(&self, id: NodeId) -> Result<&MamState, SimError> {
        Ok(&self.nodes[self.idx(id)?].routing.mam)
    }

    pub fn routing_state(&self, id: NodeId) -> Result<&RoutingState, SimError> {
        Ok(&self.nodes[self.idx(id)?].routing)
    }

    pub fn node_stats(&self, id: NodeId) -> Result<NodeStats, SimError> {
        Ok(self.nodes[self.idx(id)?].stats)
    }

    pub fn tx_queue(&self, id: NodeId) -> Result<&TxQueue<Frame>, SimError> {
        Ok(&self.nodes[self.idx(id)?].txq)
    }

    pub fn tracker(&self) -> &HubTracker {
        &self.tracker
    }

    /// Latest statistics the hub has received from each node.
    pub fn stats_inbox(&self) -> &BTreeMap<NodeId, StatsEntry> {
        &self.stats_inbox
    }

    fn position(&self, i: usize, t: SimTime) -> Position {
        if i == self.hub {
            if let Some(p) = self.hub_trace.position_at(t) {
                return p;
            }
        }
        self.nodes[i].home
    }

    /// Snapshot of present nodes at their positions at time `t`.
    pub fn topology_at(&self, t: SimTime) -> Topology {
        let nodes = (0..self.nodes.len())
            .filter(|&i| self.nodes[i].present)
            .map(|i| PlacedNode {
                id: self.nodes[i].id,
                position: self.position(i, t),
                role: self.nodes[i].role,
            })
            .collect();
        Topology::new(nodes, self.radio.range_m)
    }

    /// Takes a node out of the network: it stops sending, receiving and
    /// generating data, and is no longer provisioned.
    pub fn remove_node(&mut self, id: NodeId) -> Result<(), SimError> {
        let i = self.idx(id)?;
        if i == self.hub {
            return Err(SimError::HubRemoval);
        }
        let node = &mut self.nodes[i];
        node.present = false;
        node.txq.clear();
        Ok(())
    }

    /// Queues an operator command; it takes effect at the next event boundary.
    pub fn submit(&mut self, verb: Verb) -> Result<Command, SimError> {
        if self.commander.is_none() {
            return Err(SimError::NoCommander);
        }
        let cmd = Command {
            verb,
            issued_at: self.now,
        };
        self.inbox.push_back(cmd);
        Ok(cmd)
    }

    fn drain_inbox(&mut self) {
        while let Some(cmd) = self.inbox.pop_front() {
            self.queue.push(self.now, Event::CommandArrival(cmd));
        }
    }

    /// Pops and applies one event. Returns `Ok(false)` when nothing is pending.
    pub fn step(&mut self) -> Result<bool, SimError> {
        self.drain_inbox();
        let Some((at, event)) = self.queue.pop() else {
            return Ok(false);
        };
        debug_assert!(at >= self.now);
        self.now = at;
        self.apply(event)?;
        Ok(true)
    }

    /// Applies every event strictly before `end`, then sets the clock to `end`.
    pub fn run_until(&mut self, end: SimTime) -> Result<(), SimError> {
        loop {
            self.drain_inbox();
            match self.queue.peek_time() {
                Some(t) if t < end => {
                    self.step()?;
                }
                _ => break,
            }
        }
        self.now = self.now.max(end);
        Ok(())
    }

    pub fn run_for(&mut self, ms: u64) -> Result<(), SimError> {
        self.run_until(self.now.after(ms))
    }

    pub fn run_to_end(&mut self) -> Result<(), SimError> {
        self.run_until(SimTime(self.cfg.duration_ms))
    }

    pub fn report(&self) -> RunReport {
        RunReport {
            algorithm: self.cfg.algorithm,
            duration_ms: self.cfg.duration_ms,
            seed: self.cfg.rng_seed,
            unique_received: self.tracker.unique_count(),
            duplicate_received: self.tracker.duplicate_count(),
            total_received: self.tracker.total_count(),
            tx_total: self.totals.tx,
            rx_total: self.totals.rx,
            data_tx: self.totals.data_tx,
            no_route_drops: self.totals.no_route,
            per_node: self
                .nodes
                .iter()
                .filter(|n| n.present)
                .map(|n| (n.id, n.stats))
                .collect(),
        }
    }

    /// Floods a reachability probe from the commander (or the hub when there
    /// is none). Acknowledgments accumulate until [`World::finish_probe`].
    pub fn start_probe(&mut self) -> MessageKey {
        let prober = self
            .commander
            .filter(|&c| self.nodes[c].present)
            .unwrap_or(self.hub);
        let node = &mut self.nodes[prober];
        let seq = node.take_seq();
        let msg = Message::originate(MessageKind::Command, node.id, seq, vec![PROBE_CODE]);
        node.applied.entry(msg.origin).or_default().insert(seq);
        let key = msg.key();
        self.probe = Some(Probe {
            key,
            prober,
            acked: BTreeSet::new(),
        });
        self.flood(prober, msg, true);
        key
    }

    /// Ends the running probe, returning the prober and every node that answered.
    pub fn finish_probe(&mut self) -> Option<(NodeId, BTreeSet<NodeId>)> {
        self.probe
            .take()
            .map(|p| (self.nodes[p.prober].id, p.acked))
    }

    fn schedule_periodic(&mut self, at: SimTime, event: Event) {
        if at.ms() < self.cfg.duration_ms {
            self.queue.push(at, event);
        }
    }

    fn apply(&mut self, event: Event) -> Result<(), SimError> {
        match event {
            Event::Deliver { to, msg } => return self.deliver(to, msg),
            Event::Transmit(i) => self.transmit(i),
            Event::GenerateData(i) => self.generate_data(i),
            Event::EmitHeartbeat => self.emit_heartbeat(),
            Event::CommandArrival(cmd) => self.command_arrival(cmd),
        }
        Ok(())
    }

    fn generate_data(&mut self, i: usize) {
        if !self.nodes[i].present {
            return;
        }
        let now = self.now;
        let node = &mut self.nodes[i];
        let seq = node.take_seq();
        node.stats.generated += 1;
        let msg = Message::originate(
            MessageKind::Data,
            node.id,
            seq,
            sensor_reading(node.id, seq, now),
        );
        self.route(i, msg, true);
        self.schedule_periodic(now.after(self.cfg.data_period_ms), Event::GenerateData(i));
    }

    fn emit_heartbeat(&mut self) {
        let hub = self.hub;
        if self.nodes[hub].algorithm == Algorithm::Mam {
            let node = &mut self.nodes[hub];
            let seq = node.take_seq();
            let msg = Message::originate(MessageKind::Heartbeat, node.id, seq, Vec::new());
            self.enqueue(hub, Frame { msg, dest: None });
        }
        self.schedule_periodic(
            self.now.after(self.cfg.heartbeat_period_ms),
            Event::EmitHeartbeat,
        );
    }

    fn command_arrival(&mut self, cmd: Command) {
        let Some(c) = self.commander else { return };
        if !self.nodes[c].present {
            return;
        }
        if cmd.verb == Verb::Reboot {
            self.reboot(c);
            return;
        }
        let node = &mut self.nodes[c];
        let seq = node.take_seq();
        let msg = Message::originate(MessageKind::Command, node.id, seq, vec![cmd.verb.code()]);
        self.apply_control(c, &msg);
        self.flood(c, msg, true);
    }

    fn deliver(&mut self, to: usize, msg: Message) -> Result<(), SimError> {
        if !self.nodes[to].present {
            return Ok(());
        }
        self.totals.rx += 1;
        self.nodes[to].stats.received += 1;
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent::Delivered {
                at: self.now,
                to: self.nodes[to].id,
                msg: msg.clone(),
            });
        }
        // own messages echoed back by neighbours
        if msg.origin == self.nodes[to].id {
            return Ok(());
        }
        match msg.kind {
            MessageKind::Data if to == self.hub => {
                self.tracker
                    .record(msg.key())
                    .map_err(|source| SimError::HubOutOfMemory {
                        at: self.now,
                        source,
                    })?;
            }
            MessageKind::StatsReport if to == self.hub => {
                if let Some(entry) = StatsEntry::decode(&msg.payload) {
                    self.stats_inbox.insert(msg.origin, entry);
                }
            }
            MessageKind::Data | MessageKind::StatsReport | MessageKind::Heartbeat => {
                self.route(to, msg, false);
            }
            MessageKind::Command => {
                self.apply_control(to, &msg);
                self.flood(to, msg, false);
            }
            MessageKind::Ack => {
                if let Some(probe) = self.probe.as_mut().filter(|p| p.prober == to) {
                    if msg.payload == probe_payload(probe.key) {
                        probe.acked.insert(msg.origin);
                    }
                } else {
                    self.flood(to, msg, false);
                }
            }
        }
        Ok(())
    }

    /// Hands `msg` to the node's active relay strategy.
    fn route(&mut self, i: usize, msg: Message, originated: bool) {
        let now = self.now;
        let kind = msg.kind;
        let node = &mut self.nodes[i];
        let actions = match node.algorithm {
            Algorithm::Btmr => vec![btmr_relay(&mut node.routing.cache, node.id, &msg)],
            Algorithm::Mam => mam_handle(
                &mut node.routing.mam,
                now,
                &mut node.routing.cache,
                node.id,
                &msg,
            ),
        };
        for action in actions {
            self.act(i, action, kind, originated);
        }
    }

    /// Controlled flooding regardless of the active strategy.
    fn flood(&mut self, i: usize, msg: Message, originated: bool) {
        let node = &mut self.nodes[i];
        let action = btmr_relay(&mut node.routing.cache, node.id, &msg);
        self.act(i, action, msg.kind, originated);
    }

    fn act(&mut self, i: usize, action: RelayAction, kind: MessageKind, originated: bool) {
        match action {
            RelayAction::Broadcast(msg) => {
                if !originated {
                    self.nodes[i].stats.relayed += 1;
                }
                self.enqueue(i, Frame { msg, dest: None });
            }
            RelayAction::Unicast(to, msg) => {
                if !originated {
                    self.nodes[i].stats.relayed += 1;
                }
                if self.cfg.fault_duplicate_unicast {
                    self.enqueue(
                        i,
                        Frame {
                            msg: msg.clone(),
                            dest: Some(to),
                        },
                    );
                }
                self.enqueue(
                    i,
                    Frame {
                        msg,
                        dest: Some(to),
                    },
                );
            }
            RelayAction::Drop(DropReason::NoRoute) => {
                if kind == MessageKind::Data {
                    self.totals.no_route += 1;
                }
            }
            RelayAction::Drop(_) => {}
        }
    }

    fn enqueue(&mut self, i: usize, frame: Frame) {
        let now = self.now;
        let node = &mut self.nodes[i];
        if !node.txq.push(frame) {
            node.stats.tx_dropped += 1;
            return;
        }
        if !node.tx_scheduled {
            node.tx_scheduled = true;
            let at = now.max(node.radio_free_at);
            self.queue.push(at, Event::Transmit(i));
        }
    }

    fn transmit(&mut self, i: usize) {
        let now = self.now;
        let Some(frame) = self.nodes[i].txq.pop() else {
            self.nodes[i].tx_scheduled = false;
            return;
        };
        self.totals.tx += 1;
        if frame.msg.kind == MessageKind::Data {
            self.totals.data_tx += 1;
        }
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent::Transmitted {
                at: now,
                from: self.nodes[i].id,
                dest: frame.dest,
                msg: frame.msg.clone(),
            });
        }

        let from = self.position(i, now);
        let arrive = now.after(self.radio.latency_ms);
        for j in 0..self.nodes.len() {
            if j == i || !self.nodes[j].present {
                continue;
            }
            if frame.dest.is_some_and(|d| d != self.nodes[j].id) {
                continue;
            }
            if !self.radio.in_range(from, self.position(j, now)) {
                continue;
            }
            if self.radio.per_link_loss_prob > 0.0
                && self.rng.gen::<f64>() < self.radio.per_link_loss_prob
            {
                continue;
            }
            self.queue.push(
                arrive,
                Event::Deliver {
                    to: j,
                    msg: frame.msg.clone(),
                },
            );
        }

        let node = &mut self.nodes[i];
        node.radio_free_at = now.after(self.cfg.airtime_ms);
        if node.txq.is_empty() {
            node.tx_scheduled = false;
        } else {
            self.queue.push(node.radio_free_at, Event::Transmit(i));
        }
    }

    fn apply_control(&mut self, i: usize, msg: &Message) {
        let fresh = self.nodes[i]
            .applied
            .entry(msg.origin)
            .or_default()
            .insert(msg.seq);
        if !fresh {
            return;
        }
        match Control::decode(&msg.payload) {
            Some(Control::Verb(verb)) => self.apply_verb(i, verb),
            Some(Control::Probe) => self.answer_probe(i, msg.key()),
            None => {}
        }
    }

    fn apply_verb(&mut self, i: usize, verb: Verb) {
        match verb {
            Verb::SimReset => {
                let node = &mut self.nodes[i];
                node.stats = NodeStats::default();
                node.routing.reset();
                if i == self.hub {
                    self.tracker.clear();
                    self.stats_inbox.clear();
                }
            }
            Verb::SetMam => self.nodes[i].algorithm = Algorithm::Mam,
            Verb::SetBtmr => self.nodes[i].algorithm = Algorithm::Btmr,
            Verb::SimStats => {
                if i != self.hub {
                    self.send_stats(i);
                }
            }
            Verb::Reboot => {
                if Some(i) == self.commander {
                    self.reboot(i);
                }
            }
            Verb::RebootAll => self.reboot(i),
        }
    }

    fn send_stats(&mut self, i: usize) {
        let node = &mut self.nodes[i];
        let entry = StatsEntry {
            algorithm: node.algorithm,
            stats: node.stats,
        };
        let seq = node.take_seq();
        let msg = Message::originate(MessageKind::StatsReport, node.id, seq, entry.encode());
        self.route(i, msg, true);
    }

    fn answer_probe(&mut self, i: usize, probe: MessageKey) {
        if self.probe.as_ref().is_some_and(|p| p.prober == i) {
            return;
        }
        let node = &mut self.nodes[i];
        let seq = node.take_seq();
        let ack = Message::originate(MessageKind::Ack, node.id, seq, probe_payload(probe));
        self.flood(i, ack, true);
    }

    /// Loses volatile state; the restart counter survives and is bumped.
    fn reboot(&mut self, i: usize) {
        let node = &mut self.nodes[i];
        node.routing.reset();
        node.txq.clear();
        node.stats = NodeStats {
            restarts: node.stats.restarts + 1,
            ..NodeStats::default()
        };
        if i == self.hub {
            self.tracker.clear();
            self.stats_inbox.clear();
        }
    }
}

/// Builds a world from `config`, runs it to `duration_ms` and reports.
pub fn run(config: &ScenarioConfig) -> Result<RunReport, SimError> {
    let mut world = World::new(config.clone())?;
    world.run_to_end()?;
    Ok(world.report())
}
