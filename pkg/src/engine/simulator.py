"""Discrete-event core.

Tasks run FIFO on their nodes; DAG edges between distinct nodes become
fluid flows whose rates are recomputed whenever link activity changes.
"""
from collections import Counter
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from src.config import NCSIM_EVENT_CAP, NCSIM_SEED
from src.engine.events import Event, EventKind, EventQueue
from src.engine.state import (
    LinkUsage,
    NodeRuntime,
    RunResult,
    TaskRuntime,
    TaskTimeline,
    TransferHistory,
    TransferRecord,
)
from src.engine.timing import from_micros, to_micros
from src.error_handling import Deadlock, IllegalTransition, NonQuiescent, NoRoute
from src.events import TraceBus, TraceRecord
from src.mac.interference import InterferenceModel, LinkFactor, NoInterference
from src.models.dag import DagSpec, TaskEvent, TaskState, transition_task
from src.models.network import LinkKey, Network
from src.models.snapshot import NetworkSnapshot, PlacementPlan
from src.routing.rates import link_share
from src.routing.routes import RoutingModel
from src.scheduling.base import Scheduler
from src.utils.logging import get_logger

logger = get_logger(__name__)

RATE_TOLERANCE = 1e-12
BYTE_TOLERANCE = 1e-9


def _link_label(key: LinkKey) -> str:
    return f"{key[0]}->{key[1]}"


class Simulator:
    """One deterministic engine run. Not reusable across runs."""

    def __init__(
        self,
        network: Network,
        dags: Sequence[DagSpec],
        scheduler: Scheduler,
        routing: RoutingModel,
        interference: Optional[InterferenceModel] = None,
        seed: int = NCSIM_SEED,
        event_cap: int = NCSIM_EVENT_CAP,
        bus: Optional[TraceBus] = None,
    ):
        self.network = network
        self.dags = {dag.id: dag for dag in dags}
        self.scheduler = scheduler
        self.routing = routing
        self.interference = interference or NoInterference()
        self.seed = seed
        self.event_cap = event_cap
        self.bus = bus

        self.queue = EventQueue()
        self.clock_us = 0
        self.tasks: Dict[str, TaskRuntime] = {}
        self.nodes: Dict[str, NodeRuntime] = {node_id: NodeRuntime() for node_id in network.node_ids}
        self.transfers: Dict[str, TransferRecord] = {}
        self.active: Dict[str, TransferRecord] = {}
        self.stalled: List[str] = []
        self.flow_counts: Counter = Counter()
        self.plans: Dict[str, PlacementPlan] = {}
        self._link_flows: Counter = Counter()
        self._link_busy_since: Dict[LinkKey, int] = {}
        self._link_busy_us: Counter = Counter()
        self._processed = 0
        self._handlers: Dict[EventKind, Callable[[Event], None]] = {
            EventKind.DAG_INJECT: self._on_dag_inject,
            EventKind.TASK_COMPLETE: self._on_task_complete,
            EventKind.TRANSFER_COMPLETE: self._on_transfer_complete,
            EventKind.TASK_READY: self._on_task_ready,
            EventKind.TASK_START: self._on_task_start,
            EventKind.TRANSFER_START: self._on_transfer_start,
        }

    # -- run loop ---------------------------------------------------------

    def run(self) -> RunResult:
        """Process events to quiescence.

        Raises:
            Deadlock: the heap drained with tasks still incomplete
            NonQuiescent: more than ``event_cap`` events were processed
        """
        for dag in sorted(self.dags.values(), key=lambda d: (d.inject_at, d.id)):
            self.queue.push(to_micros(dag.inject_at), EventKind.DAG_INJECT, dag=dag.id)

        while True:
            event = self.queue.pop()
            if event is None:
                break
            self._processed += 1
            if self._processed > self.event_cap:
                raise NonQuiescent(
                    f"event cap of {self.event_cap} exceeded at t={from_micros(self.clock_us)}",
                    details={"event_cap": self.event_cap, "clock": from_micros(self.clock_us)},
                )
            if event.time_us < self.clock_us:
                raise IllegalTransition(
                    f"event {event.kind.value} scheduled in the past",
                    details={"event_time": event.time_us, "clock": self.clock_us},
                )
            self.clock_us = event.time_us
            self._handlers[event.kind](event)

        incomplete = sorted(q for q, t in self.tasks.items() if t.state is not TaskState.COMPLETED)
        if incomplete:
            raise Deadlock(
                f"{len(incomplete)} task(s) cannot complete",
                stuck_tasks=incomplete,
                details={"stalled_transfers": list(self.stalled), "clock": from_micros(self.clock_us)},
            )
        result = self._collect()
        logger.info(
            "Run finished",
            extra={
                "makespan": result.makespan,
                "events": self._processed,
                "interference": self.interference.name,
                "routing": self.routing.name,
                "scheduler": self.scheduler.name,
            },
        )
        return result

    # -- handlers ---------------------------------------------------------

    def _on_dag_inject(self, event: Event) -> None:
        dag = self.dags[event.dag]
        snapshot = NetworkSnapshot.of(
            self.network,
            {node_id: node.depth for node_id, node in self.nodes.items()},
            dict(self.flow_counts),
        )
        plan = self.scheduler.schedule(dag, snapshot)
        self.plans[dag.id] = plan
        self._trace(EventKind.DAG_INJECT.value, dag=dag.id, detail={"placement": plan.as_dict()})
        for task in dag.tasks:
            runtime = TaskRuntime(
                dag=dag.id,
                task=task.id,
                node=plan[task.id],
                compute_cost=task.compute_cost,
                pending_inputs=len(dag.in_edges(task.id)),
            )
            self.tasks[runtime.qualified] = runtime
            if runtime.pending_inputs == 0:
                self.queue.push(self.clock_us, EventKind.TASK_READY, dag=dag.id, task=task.id)

    def _on_task_ready(self, event: Event) -> None:
        runtime = self.tasks[f"{event.dag}/{event.task}"]
        runtime.state = transition_task(runtime.state, TaskEvent.INPUTS_DELIVERED)
        runtime.ready_us = self.clock_us
        self._trace(EventKind.TASK_READY.value, dag=runtime.dag, task=runtime.task, node=runtime.node)
        node = self.nodes[runtime.node]
        if node.busy is None:
            node.busy = runtime.qualified
            self.queue.push(self.clock_us, EventKind.TASK_START, dag=runtime.dag, task=runtime.task)
        else:
            runtime.state = transition_task(runtime.state, TaskEvent.NODE_BUSY)
            node.queue.append(runtime.qualified)

    def _on_task_start(self, event: Event) -> None:
        runtime = self.tasks[f"{event.dag}/{event.task}"]
        runtime.state = transition_task(runtime.state, TaskEvent.NODE_IDLE)
        runtime.start_us = self.clock_us
        duration = runtime.compute_cost / self.network.node(runtime.node).capacity
        self.queue.push(
            self.clock_us + to_micros(duration), EventKind.TASK_COMPLETE, dag=runtime.dag, task=runtime.task
        )
        self._trace(
            EventKind.TASK_START.value,
            dag=runtime.dag,
            task=runtime.task,
            node=runtime.node,
            detail={"duration": duration},
        )

    def _on_task_complete(self, event: Event) -> None:
        runtime = self.tasks[f"{event.dag}/{event.task}"]
        runtime.state = transition_task(runtime.state, TaskEvent.FINISHED)
        runtime.end_us = self.clock_us
        self._trace(EventKind.TASK_COMPLETE.value, dag=runtime.dag, task=runtime.task, node=runtime.node)

        node = self.nodes[runtime.node]
        node.busy = None
        if node.queue:
            head = self.tasks[node.queue.popleft()]
            node.busy = head.qualified
            self.queue.push(self.clock_us, EventKind.TASK_START, dag=head.dag, task=head.task)

        dag = self.dags[runtime.dag]
        plan = self.plans[dag.id]
        for edge in dag.out_edges(runtime.task):
            flow_id = self._flow_id(dag.id, edge.src_task, edge.dst_task)
            record = TransferRecord(
                flow=flow_id,
                dag=dag.id,
                src_task=edge.src_task,
                dst_task=edge.dst_task,
                src_node=plan[edge.src_task],
                dst_node=plan[edge.dst_task],
                total=edge.data_size,
                start_us=self.clock_us,
                since_us=self.clock_us,
            )
            self.transfers[flow_id] = record
            if record.src_node == record.dst_node or record.total == 0:
                record.transferred = record.total
                self.queue.push(self.clock_us, EventKind.TRANSFER_COMPLETE, dag=dag.id, flow=flow_id)
            else:
                self.queue.push(self.clock_us, EventKind.TRANSFER_START, dag=dag.id, flow=flow_id)

    def _on_transfer_start(self, event: Event) -> None:
        record = self.transfers[event.flow]
        record.start_us = record.since_us = self.clock_us
        try:
            route = self.routing.route(self.network, record.src_node, record.dst_node)
        except NoRoute:
            logger.warning(
                "Transfer stalled: no route",
                extra={"flow": record.flow, "src": record.src_node, "dst": record.dst_node},
            )
            self.stalled.append(record.flow)
            self._trace(
                EventKind.TRANSFER_START.value,
                dag=record.dag,
                flow=record.flow,
                detail={"mb": record.total, "route": None},
            )
            return
        record.route = route
        self.active[record.flow] = record
        for key in route.keys:
            self._add_flow(key)
        self._trace(
            EventKind.TRANSFER_START.value,
            dag=record.dag,
            flow=record.flow,
            detail={"mb": record.total, "route": list(route.nodes)},
        )
        self.recalc_cascade(set(route.keys))

    def _on_transfer_complete(self, event: Event) -> None:
        record = self.transfers[event.flow]
        record.end_us = self.clock_us
        if record.route is not None:
            record.freeze(self.clock_us)
            record.transferred = record.total
            record.completion = None
            del self.active[record.flow]
            for key in record.route.keys:
                self._remove_flow(key)
        self._trace(
            EventKind.TRANSFER_COMPLETE.value,
            dag=record.dag,
            flow=record.flow,
            node=record.dst_node,
            detail={"mb": record.total, "colocated": record.route is None},
        )
        if record.route is not None:
            self.recalc_cascade(set(record.route.keys))

        consumer = self.tasks[f"{record.dag}/{record.dst_task}"]
        consumer.pending_inputs -= 1
        if consumer.pending_inputs == 0:
            self.queue.push(self.clock_us, EventKind.TASK_READY, dag=consumer.dag, task=consumer.task)

    # -- bandwidth recalculation -----------------------------------------

    def recalc_cascade(self, changed: Set[LinkKey]) -> None:
        """Re-rate every active transfer whose route touches a link affected by ``changed``.

        Progress is frozen at the old rate, and the pending completion event
        is replaced only when the rate actually moves.
        """
        active_links: FrozenSet[LinkKey] = frozenset(k for k, n in self.flow_counts.items() if n > 0)
        affected = self.interference.affected_links(set(changed), set(active_links))
        factors: Dict[LinkKey, LinkFactor] = {}
        touched = 0
        for flow_id in sorted(self.active):
            record = self.active[flow_id]
            if record.rate is not None and affected.isdisjoint(record.route.keys):
                continue
            new_rate, bottleneck, factor = self._route_rate(record, active_links, factors)
            touched += 1
            if record.rate is None:
                record.rate = new_rate
                record.since_us = self.clock_us
                self._schedule_completion(record)
                continue
            record.freeze(self.clock_us)
            if record.remaining <= BYTE_TOLERANCE:
                # only route latency left
                continue
            if abs(new_rate - record.rate) <= RATE_TOLERANCE * max(1.0, record.rate):
                continue
            old_rate = record.rate
            record.rate = new_rate
            self.queue.cancel(record.completion)
            self._schedule_completion(record)
            self._trace(
                "rate_change",
                dag=record.dag,
                flow=record.flow,
                link=_link_label(bottleneck),
                detail={
                    "old": old_rate,
                    "new": new_rate,
                    "remaining": record.remaining,
                    "f": factor.f,
                    "f_ht": factor.f_ht,
                    "eta": factor.eta,
                    "n": factor.n,
                },
            )
        logger.debug(
            "Recalc cascade",
            extra={"changed": len(changed), "affected": len(affected), "rerated": touched},
        )

    def _route_rate(
        self,
        record: TransferRecord,
        active_links: FrozenSet[LinkKey],
        factors: Dict[LinkKey, LinkFactor],
    ) -> Tuple[float, LinkKey, LinkFactor]:
        best: Optional[Tuple[float, LinkKey, LinkFactor]] = None
        for link in record.route.links:
            factor = factors.get(link.key)
            if factor is None:
                factor = factors[link.key] = self.interference.link_factor(link.key, active_links)
            share = link_share(link, self.flow_counts[link.key], factor.f)
            if best is None or share < best[0]:
                best = (share, link.key, factor)
        return best

    def _schedule_completion(self, record: TransferRecord) -> None:
        # Route latency is charged once, after the last byte.
        record.data_end_us = self.clock_us + to_micros(record.remaining / record.rate)
        record.completion = self.queue.push(
            self.clock_us + to_micros(record.remaining / record.rate + record.route.latency),
            EventKind.TRANSFER_COMPLETE,
            dag=record.dag,
            flow=record.flow,
        )

    # -- bookkeeping ------------------------------------------------------

    def _flow_id(self, dag: str, src_task: str, dst_task: str) -> str:
        flow_id = f"{dag}/{src_task}->{dst_task}"
        suffix = 1
        while flow_id in self.transfers:
            suffix += 1
            flow_id = f"{dag}/{src_task}->{dst_task}#{suffix}"
        return flow_id

    def _add_flow(self, key: LinkKey) -> None:
        if self.flow_counts[key] == 0:
            self._link_busy_since[key] = self.clock_us
        self.flow_counts[key] += 1
        self._link_flows[key] += 1

    def _remove_flow(self, key: LinkKey) -> None:
        self.flow_counts[key] -= 1
        if self.flow_counts[key] == 0:
            self._link_busy_us[key] += self.clock_us - self._link_busy_since.pop(key)
            del self.flow_counts[key]

    def _trace(self, kind: str, **fields) -> None:
        if self.bus is not None:
            self.bus.emit(TraceRecord(t_us=self.clock_us, kind=kind, **fields))

    def _collect(self) -> RunResult:
        timelines = [
            TaskTimeline(
                dag=t.dag,
                task=t.task,
                node=t.node,
                ready=from_micros(t.ready_us),
                start=from_micros(t.start_us),
                end=from_micros(t.end_us),
            )
            for t in self.tasks.values()
        ]
        histories = [
            TransferHistory(
                flow=r.flow,
                dag=r.dag,
                src_task=r.src_task,
                dst_task=r.dst_task,
                src_node=r.src_node,
                dst_node=r.dst_node,
                size=r.total,
                route=r.route.nodes if r.route is not None else (),
                start=from_micros(r.start_us),
                end=from_micros(r.end_us),
                phases=tuple((from_micros(p.start_us), from_micros(p.end_us), p.rate) for p in r.phases),
            )
            for r in self.transfers.values()
        ]
        dag_makespans: Dict[str, float] = {}
        for t in timelines:
            dag_makespans[t.dag] = max(dag_makespans.get(t.dag, 0.0), t.end)
        usage = {
            key: LinkUsage(flows=self._link_flows[key], busy_time=from_micros(self._link_busy_us[key]))
            for key in sorted(self._link_flows)
        }
        return RunResult(
            makespan=max((t.end for t in timelines), default=0.0),
            tasks=timelines,
            transfers=histories,
            link_usage=usage,
            plans={dag_id: plan.as_dict() for dag_id, plan in self.plans.items()},
            dag_makespans=dag_makespans,
            events_processed=self._processed,
            stalled=list(self.stalled),
        )


def run_simulation(
    network: Network,
    dags: Iterable[DagSpec],
    scheduler: Scheduler,
    routing: RoutingModel,
    interference: Optional[InterferenceModel] = None,
    **options,
) -> RunResult:
    return Simulator(network, list(dags), scheduler, routing, interference, **options).run()
