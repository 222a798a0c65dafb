"""Dominant roots of monic integer polynomials: exact profiles, censuses, families."""

import csv
import io
import json
from fractions import Fraction

from . import _domroots
from ._domroots import (
    BudgetExceeded,
    ContractError,
    InsufficientData,
    InvariantViolation,
    ParseError,
    dominant_root_count,
    is_irreducible,
    parse_poly,
)

__version__ = _domroots.__version__


def modulus_profile(poly, precision_ceiling=1 << 16):
    return json.loads(_domroots.modulus_profile(poly, precision_ceiling))


def factor(poly):
    return json.loads(_domroots.factor(poly))


def classify(poly):
    k, irreducible, height = _domroots.classify(poly)
    return {"k": k, "irreducible": irreducible, "height": int(height)}


def compute_e(n, k):
    num, den = _domroots.compute_e(n, k)
    return Fraction(int(num), int(den))


class Census:
    """Counts D, I, R keyed by (k, H), plus the raw CSV."""

    def __init__(self, text):
        self.csv = text
        self.meta = {}
        self.D, self.I, self.R = {}, {}, {}
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                for item in line[1:].split():
                    key, _, val = item.partition("=")
                    self.meta[key] = val
            elif line:
                body.append(line)
        for row in csv.DictReader(io.StringIO("\n".join(body))):
            key = (int(row["k"]), int(row["H"]))
            self.D[key], self.I[key], self.R[key] = int(row["D"]), int(row["I"]), int(row["R"])
            self.n = int(row["n"])

    @property
    def heights(self):
        return sorted({h for _, h in self.D})

    def compare(self, slack=0.35, ratio_limit=3.0):
        return json.loads(_domroots.compare_csv(self.csv, slack, ratio_limit))


def census(n, max_height, heights=(), threads=0, budget=1 << 31):
    return Census(_domroots.census(n, max_height, list(heights), threads, budget))


def families(name, n, k, H, limit=0):
    return [json.loads(s) for s in _domroots.families(name, n, k, H, limit)]
