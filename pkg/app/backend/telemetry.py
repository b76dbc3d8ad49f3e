"""
OpenTelemetry tracing for pipeline phases (search, canonicalize, classify, verify).
Works with the no-op tracer when no SDK or exporter is configured.
"""
import logging
import os
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List

from opentelemetry import trace
from opentelemetry.trace.status import Status, StatusCode

# Recent phase records, newest last
_phases: List[Dict[str, Any]] = []
_RING_SIZE = 50

logger = logging.getLogger("telemetry")


def get_tracer():
    """Get OpenTelemetry tracer for creating spans"""
    return trace.get_tracer("condorcet")


def _attribute_value(value: Any) -> Any:
    if isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


@contextmanager
def trace_phase(name: str, **attributes: Any) -> Iterator[Dict[str, Any]]:
    """
    Span around one pipeline phase. The yielded dict collects counters; they
    are attached to the span and kept in the phase ring when the phase ends.
    """
    tracer = get_tracer()
    counters: Dict[str, Any] = {}
    start = time.perf_counter()
    with tracer.start_as_current_span(f"condorcet.{name}") as span:
        span.set_attributes({
            "operation.name": f"condorcet.{name}",
            "component": "condorcet",
            **{f"condorcet.{key}": _attribute_value(value) for key, value in attributes.items()},
        })
        status = "completed"
        try:
            yield counters
        except Exception as e:
            status = "failed"
            span.set_status(Status(StatusCode.ERROR, str(e)))
            span.record_exception(e)
            raise
        else:
            span.set_status(Status(StatusCode.OK))
        finally:
            duration = time.perf_counter() - start
            span.set_attribute("duration_ms", duration * 1000)
            for key, value in counters.items():
                span.set_attribute(f"condorcet.{key}", _attribute_value(value))
            _phases.append({
                "id": f"{span.get_span_context().span_id:016x}",
                "phase": name,
                "attributes": dict(attributes),
                "counters": dict(counters),
                "timestamp": time.time(),
                "duration": duration,
                "status": status,
            })
            if len(_phases) > _RING_SIZE:
                _phases[:] = _phases[-_RING_SIZE:]
            logger.info(f"⏱️ Phase {name} {status} in {duration:.3f}s")


def get_run_stats() -> Dict[str, Any]:
    """Recent phase records plus per-phase totals"""
    try:
        limit = int(os.environ.get("CONDORCET_TELEMETRY_LIMIT", str(_RING_SIZE)))
    except ValueError:
        limit = _RING_SIZE
    limit = max(1, min(limit, _RING_SIZE))
    totals: Dict[str, float] = {}
    for record in _phases:
        totals[record["phase"]] = totals.get(record["phase"], 0.0) + record["duration"]
    return {
        "phases": _phases[-limit:],
        "stats": {
            "total_phases": len(_phases),
            "failed_phases": sum(1 for record in _phases if record["status"] == "failed"),
            "duration_by_phase": totals,
        },
    }


def reset_run_stats() -> None:
    _phases.clear()
