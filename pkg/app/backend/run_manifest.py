"""
JSON manifest written next to every class file: what was run, with which
orderings, and what came out.
"""
import json
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

from settings import COMPARATOR_ID, LAW_ORDER_ID

logger = logging.getLogger("run_manifest")


def manifest_path(class_path: Union[str, Path]) -> Path:
    class_path = Path(class_path)
    return class_path.with_name(class_path.name + ".manifest.json")


class RunManifest:
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def start(self, command: str, **parameters: Any) -> None:
        data = {
            "command": command,
            "start_time": datetime.now().isoformat(),
            "law_order": LAW_ORDER_ID,
            "comparator": COMPARATOR_ID,
            "parameters": {key: self._serialize(value) for key, value in parameters.items()},
            "phases": [],
            "results": {},
            "metadata": {
                "environment": "production" if os.environ.get("RUNNING_IN_PRODUCTION", "").lower() == "true"
                else "development",
            },
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._save(data)
        logger.info(f"Started run manifest {self.path}")

    def log_phase(self, phase: str, duration: float, counters: Optional[Dict[str, Any]] = None) -> None:
        self._update(lambda data: data["phases"].append({
            "phase": phase,
            "timestamp": datetime.now().isoformat(),
            "duration": duration,
            "counters": {key: self._serialize(value) for key, value in (counters or {}).items()},
        }))

    def log_results(self, **results: Any) -> None:
        self._update(lambda data: data["results"].update(
            {key: self._serialize(value) for key, value in results.items()}))

    def finish(self) -> None:
        def close(data: Dict[str, Any]) -> None:
            data["end_time"] = datetime.now().isoformat()
            data["duration"] = (
                datetime.fromisoformat(data["end_time"]) - datetime.fromisoformat(data["start_time"])
            ).total_seconds()
        self._update(close)
        logger.info(f"Finished run manifest {self.path}")

    def load(self) -> Dict[str, Any]:
        with open(self.path, "r", encoding="utf-8") as f:
            return json.load(f)

    def _update(self, change) -> None:
        if not self.path.exists():
            return
        try:
            data = self.load()
            change(data)
            data["last_updated"] = datetime.now().isoformat()
            self._save(data)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Error updating run manifest {self.path}: {e}")

    def _save(self, data: Dict[str, Any]) -> None:
        with open(self.path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False)

    @staticmethod
    def _serialize(value: Any) -> Any:
        if isinstance(value, (dict, list, str, int, float, bool, type(None))):
            return value
        if isinstance(value, (tuple, set)):
            return list(value)
        return str(value)
