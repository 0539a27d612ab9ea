"""
kvpoly Acceptance Properties

Each property is a named check over the corpus (and seeded random diagrams)
returning a CheckResult. ``run_checks`` evaluates corpus entries and
properties in a thread pool and reports them sorted by name.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .config import ConfigManager
from .corpus import CheckResult, CorpusEntry, check_entry
from .diagram import (
    Diagram,
    DiagramError,
    add_bare_loop,
    circuits,
    diagram_components,
    graph_components,
    insert_curl,
    random_diagram,
)
from .invariant import bracket, braces, normalized, one_crossing_test, planar_value
from .laurent import ONE, lp_monomial, lp_scale
from .orientation import enumerate_hyperbolic, hyperbolic_state_sum, twisting_number
from .skein import oracle_bracket, skein_residual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckSettings:
    """Numeric knobs for the property checks, read from the config."""

    random_samples: int = 50
    curl_trials: int = 20
    loop_doubling: int = 10
    seed: int = 2001
    max_oracle_crossings: int = 8
    oracle_cap: int = 12
    workers: int = 4

    @classmethod
    def from_config(cls, config: ConfigManager) -> "CheckSettings":
        return cls(
            random_samples=config.get_int("check.random_samples"),
            curl_trials=config.get_int("check.curl_trials"),
            loop_doubling=config.get_int("check.loop_doubling"),
            seed=config.get_int("check.seed"),
            max_oracle_crossings=config.get_int("check.max_oracle_crossings"),
            oracle_cap=config.get_oracle_cap(),
            workers=max(1, config.get_int("check.workers")),
        )

    @property
    def oracle_limit(self) -> int:
        return min(self.max_oracle_crossings, self.oracle_cap)


@dataclass(frozen=True)
class Sample:
    """A named diagram handed to the property checks."""

    name: str
    diagram: Diagram
    tags: Tuple[str, ...] = ()

    @property
    def is_knot(self) -> bool:
        return self.diagram.n_vertices == 0 and len(circuits(self.diagram)) == 1


Property = Callable[[List[Sample], CheckSettings], CheckResult]


def _result(name: str, failures: List[str], checked: int) -> CheckResult:
    if failures:
        logger.warning(f"Property {name} failed: {failures[0]}")
        return CheckResult(f"property:{name}", False, "; ".join(failures))
    return CheckResult(f"property:{name}", True, f"{checked} case(s)")


def random_samples(settings: CheckSettings) -> List[Sample]:
    """Seeded random combinatorial diagrams with 1 to 5 nodes."""
    rng = random.Random(settings.seed)
    return [
        Sample(f"random#{i}", random_diagram(rng, rng.randint(1, 5), vertex_ratio=rng.random()))
        for i in range(settings.random_samples)
    ]


def check_planar_value(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """Crossing-free diagrams evaluate to 2^(c-1) (-A - A^-1)^v."""
    failures = []
    cases = [s for s in samples if s.diagram.n_crossings == 0]
    for s in cases:
        want = planar_value(graph_components(s.diagram), s.diagram.n_vertices)
        got = bracket(s.diagram)
        if got != want:
            failures.append(f"{s.name}: {got} != {want}")
    return _result("planar_value", failures, len(cases))


def check_knot_value(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """Knot diagrams evaluate to A^t under both evaluators."""
    failures = []
    cases = [s for s in samples if s.is_knot]
    for s in cases:
        want = lp_monomial(1, twisting_number(s.diagram))
        got = bracket(s.diagram)
        if got != want:
            failures.append(f"{s.name}: state sum {got} != {want}")
        elif s.diagram.n_crossings <= settings.oracle_limit:
            oracle = oracle_bracket(s.diagram, cap=settings.oracle_cap)
            if oracle != want:
                failures.append(f"{s.name}: oracle {oracle} != {want}")
    return _result("knot_value", failures, len(cases))


def check_zero_iff_nonseparable(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """The bracket vanishes exactly when there is no hyperbolic orientation."""
    failures = []
    for s in samples:
        separable = bool(enumerate_hyperbolic(s.diagram))
        value = bracket(s.diagram)
        if value.is_zero == separable:
            failures.append(f"{s.name}: separable={separable} but bracket={value}")
    return _result("zero_iff_nonseparable", failures, len(samples))


def check_skein_identity(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """The state sum satisfies the skein relation at every crossing."""
    failures = []
    checked = 0
    for s in samples:
        for index in s.diagram.crossing_indices:
            checked += 1
            residual = skein_residual(s.diagram, index)
            if not residual.is_zero:
                failures.append(f"{s.name} crossing {index}: residual {residual}")
    return _result("skein_identity", failures, checked)


def check_oracle_equivalence(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """Skein expansion agrees with the state sum, whichever crossing is expanded first."""
    failures = []
    cases = [s for s in samples if s.diagram.n_crossings <= settings.oracle_limit]
    for s in cases:
        lowest = oracle_bracket(s.diagram, cap=settings.oracle_cap, pivot="lowest")
        highest = oracle_bracket(s.diagram, cap=settings.oracle_cap, pivot="highest")
        state_sum = bracket(s.diagram)
        if lowest != state_sum:
            failures.append(f"{s.name}: oracle {lowest} != state sum {state_sum}")
        if highest != lowest:
            failures.append(f"{s.name}: pivot order changes oracle ({highest} != {lowest})")
    return _result("oracle_equivalence", failures, len(cases))


def check_partition_aggregation(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """The orientation state sum equals 2^dcount times the partition polynomial."""
    failures = []
    for s in samples:
        state_sum = hyperbolic_state_sum(s.diagram)
        aggregated = lp_scale(braces(s.diagram), 2 ** diagram_components(s.diagram))
        if state_sum != aggregated:
            failures.append(f"{s.name}: {state_sum} != {aggregated}")
    return _result("partition_aggregation", failures, len(samples))


def _curl_site(rng: random.Random, d: Diagram) -> int:
    labels = d.labels
    if d.bare_loops and (not labels or rng.random() < 0.25):
        return 0
    return rng.choice(labels)


def check_reidemeister_one(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """A random curl multiplies [G] by A^sign, shifts t by sign and keeps P fixed."""
    rng = random.Random(settings.seed + 1)
    failures = []
    trials = settings.curl_trials if samples else 0
    for _ in range(trials):
        s = rng.choice(samples)
        arc = _curl_site(rng, s.diagram)
        sign = rng.choice((1, -1))
        curled = insert_curl(s.diagram, arc, sign)
        tag = f"{s.name} arc {arc} sign {sign:+d}"
        if bracket(curled) != lp_monomial(1, sign) * bracket(s.diagram):
            failures.append(f"{tag}: bracket not multiplied by A^{sign}")
        if twisting_number(curled) != twisting_number(s.diagram) + sign:
            failures.append(f"{tag}: twisting number did not shift by {sign}")
        if normalized(curled) != normalized(s.diagram):
            failures.append(f"{tag}: normalized invariant changed")
    return _result("reidemeister_one", failures, trials)


def check_one_crossing(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """For one-crossing diagrams the component-count criterion predicts a zero bracket."""
    failures = []
    cases = [s for s in samples if s.diagram.n_crossings == 1]
    for s in cases:
        result = one_crossing_test(s.diagram)
        value = bracket(s.diagram)
        if result.vanishes != value.is_zero:
            failures.append(
                f"{s.name}: c_A={result.c_a} c_B={result.c_b} c_V={result.c_v} but bracket={value}"
            )
    return _result("one_crossing", failures, len(cases))


def check_odd_circuit(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """A circuit through an odd number of vertices leaves no hyperbolic orientation."""
    failures = []
    cases = samples + random_samples(settings)
    for s in cases:
        odd = any(circuit.vertex_passages % 2 for circuit in circuits(s.diagram))
        if odd and enumerate_hyperbolic(s.diagram):
            failures.append(f"{s.name}: odd circuit but hyperbolic orientations exist")
    return _result("odd_circuit", failures, len(cases))


def check_cardinality(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """There are either no hyperbolic orientations or exactly 2^c of them."""
    failures = []
    cases = samples + random_samples(settings)
    for s in cases:
        count = len(enumerate_hyperbolic(s.diagram))
        c = graph_components(s.diagram)
        if count not in (0, 2**c):
            failures.append(f"{s.name}: {count} orientations with c = {c}")
    return _result("cardinality", failures, len(cases))


def check_loop_doubling(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """Adding a disjoint bare loop doubles the bracket."""
    failures = []
    cases = samples[: settings.loop_doubling]
    for s in cases:
        doubled = bracket(add_bare_loop(s.diagram))
        want = lp_scale(bracket(s.diagram), 2)
        if doubled != want:
            failures.append(f"{s.name}: {doubled} != {want}")
    return _result("loop_doubling", failures, len(cases))


def check_normalization(samples: List[Sample], settings: CheckSettings) -> CheckResult:
    """P(G) = 1 on planar diagrams and knots."""
    failures = []
    cases = [s for s in samples if "planar" in s.tags or s.is_knot]
    for s in cases:
        value = normalized(s.diagram)
        if value != ONE:
            failures.append(f"{s.name}: P = {value}")
    return _result("normalization", failures, len(cases))


PROPERTIES: Dict[str, Property] = {
    "planar_value": check_planar_value,
    "knot_value": check_knot_value,
    "zero_iff_nonseparable": check_zero_iff_nonseparable,
    "skein_identity": check_skein_identity,
    "oracle_equivalence": check_oracle_equivalence,
    "partition_aggregation": check_partition_aggregation,
    "reidemeister_one": check_reidemeister_one,
    "one_crossing": check_one_crossing,
    "odd_circuit": check_odd_circuit,
    "cardinality": check_cardinality,
    "loop_doubling": check_loop_doubling,
    "normalization": check_normalization,
}


def _run_property(name: str, check: Property, samples: List[Sample], settings: CheckSettings) -> CheckResult:
    try:
        return check(samples, settings)
    except Exception as e:
        logger.error(f"Property {name} raised: {e}", exc_info=True)
        return CheckResult(f"property:{name}", False, f"{type(e).__name__}: {e}")


def run_checks(
    entries: List[CorpusEntry],
    settings: Optional[CheckSettings] = None,
    properties: Optional[Dict[str, Property]] = None,
) -> List[CheckResult]:
    """
    Check every corpus entry against its manifest and run the acceptance properties.

    Entries whose diagram fails to load are reported as failed and left out of
    the property checks.

    Args:
        entries: Corpus entries from ``load_manifest``
        settings: Check settings (defaults when None)
        properties: Name -> check mapping (all of PROPERTIES when None)

    Returns:
        Results sorted by name
    """
    settings = settings or CheckSettings()
    properties = PROPERTIES if properties is None else properties

    samples: List[Sample] = []
    for entry in entries:
        try:
            samples.append(Sample(entry.name, entry.load(), entry.tags))
        except (DiagramError, FileNotFoundError) as e:
            logger.error(f"Skipping {entry.name} in property checks: {e}")

    logger.info(
        f"Checking {len(entries)} entries and {len(properties)} properties "
        f"with {settings.workers} worker(s)"
    )
    results: List[CheckResult] = []
    with ThreadPoolExecutor(max_workers=settings.workers) as executor:
        futures = [executor.submit(check_entry, entry) for entry in entries]
        futures.extend(
            executor.submit(_run_property, name, check, samples, settings)
            for name, check in properties.items()
        )
        for future in as_completed(futures):
            results.append(future.result())

    results.sort(key=lambda result: result.name)
    passed = sum(result.passed for result in results)
    logger.info(f"Check finished: {passed}/{len(results)} passed")
    return results
