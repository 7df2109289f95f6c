from __future__ import annotations

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from catalog import Bounds, enumerate_graphs  # noqa: E402
from models import FlavorEnum  # noqa: E402
from morphisms import clear_hom_cache  # noqa: E402
from reedy import check_reedy_axioms  # noqa: E402

SMALL = Bounds(max_vertices=2, max_inner=2, max_valence=3, max_legs=2)


def _measure(label: str, action, runs: int = 3) -> None:
    durations = []
    for _ in range(runs):
        clear_hom_cache()
        start = time.perf_counter()
        action()
        durations.append((time.perf_counter() - start) * 1000)
    avg = sum(durations) / len(durations)
    print(f"{label} avg_ms={avg:.2f} samples={','.join(f'{d:.2f}' for d in durations)}")


def main() -> None:
    for flavor in FlavorEnum:
        _measure(f"enumerate[{flavor.value}]", lambda: enumerate_graphs(flavor, SMALL))
        catalog = enumerate_graphs(flavor, SMALL)
        _measure(f"hom_table[{flavor.value}]", lambda: catalog.hom_table(1), runs=1)
        _measure(f"reedy[{flavor.value}]", lambda: check_reedy_axioms(catalog), runs=1)


if __name__ == "__main__":
    main()
