"""Caps, tolerances, budgets and grid configuration."""

import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path


PACKAGE_DIRPATH = Path(__file__).resolve().parent
DATA_DIRPATH = PACKAGE_DIRPATH / "data"
TEMPLATES_DIRPATH = PACKAGE_DIRPATH / "templates"

# Bit-vector adjacency is capped at one 64-bit word per row.
VERTEX_CAP = 64

# Subset sweeps enumerate 2^n subsets and refuse above this order.
SUBSET_SWEEP_CAP = 20

# Spanning-tree enumeration refuses when the matrix-tree count exceeds this.
DEFAULT_TREE_BUDGET = 200_000

# k-matching enumeration stops after this many matchings.
DEFAULT_MATCHING_BUDGET = 1_000_000

# Seeded restarts of the constructive spanning-tree search.
DEFAULT_RESTARTS = 64

DEFAULT_SEED = 0

DEFAULT_TOLERANCES = {
    "eig": 1e-12,         # Jacobi off-diagonal mass, power-iteration stop
    "agreement": 1e-8,    # eigensolver vs quotient root
    "hypothesis": 1e-9,   # rho(G) >= threshold comparisons
    "interlace": 1e-9,    # interlacing and gamma_2 bound
    "root": 1e-13,        # cubic root refinement
}


def default_jobs():
    return os.cpu_count() or 1


@dataclass
class RunConfig:
    """Resolved configuration of one CLI run, embedded in its output.

    The worker count is not recorded; output is the same for any --jobs.
    """

    command: str
    flags: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output: str | None = None
    format: str = "json"

    def to_dict(self):
        return asdict(self)


def resolve_tolerances(tol=None):
    """Default tolerance table, with `tol` overriding the comparison
    tolerances (agreement, hypothesis, interlace) when given."""
    tolerances = dict(DEFAULT_TOLERANCES)
    if tol is not None:
        for key in ("agreement", "hypothesis", "interlace"):
            tolerances[key] = tol
    return tolerances


def load_grids(grids_filepath=None):
    """Load the audit and sweep grids.

    Returns a dict keyed by audit name. Each entry carries the parameter
    ranges the corresponding harness grid generator expands.
    """
    grids_filepath = grids_filepath or DATA_DIRPATH / "grids.json"
    if not grids_filepath.exists():
        print(f"  Warning: {grids_filepath} not found, using empty grids",
              file=sys.stderr)
        return {}
    return json.loads(grids_filepath.read_text())
