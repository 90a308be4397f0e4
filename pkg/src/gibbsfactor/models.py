"""Model files: JSON serialization of a Markov source plus a one-block map.

Schema (one JSON object):

    {
      "alphabet":   ["a", "b", ...],          source symbols, distinct strings
      "incidence":  [[0, 1, ...], ...],       0/1 square matrix
      "transition": [[0.0, 0.5, ...], ...],   stochastic, supported on incidence
      "projection": {"a": "x", "b": "x", ...} source label -> target label
      "options":    {...}                     optional, free-form parameters
    }

The target alphabet is implied by the projection, ordered by first use along
the source alphabet.  Construction parameters recorded under "options" are
validated when they are recognized (currently "gamma").
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .errors import ModelError
from .markov import MarkovModel
from .projection import FactorSystem, Projection, build_factor_system
from .tmc import Alphabet, Tmc

EXAMPLES = ("adhoc5", "fullshift4", "nongibbs6", "converse_false")

GAMMA_DEFAULT = 0.3
GAMMA_LO = 0.25
GAMMA_HI = 1.0 / 3.0


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (GAMMA_LO < gamma < GAMMA_HI):
        raise ModelError(
            f"gamma must lie strictly between 1/4 and 1/3, got {gamma!r}"
        )
    return gamma


def expand_example(example_id: str, gamma: Optional[float] = None) -> dict:
    """Document for a built-in example system.

    adhoc5: five source symbols over a sparse graph, three-symbol image,
    generic transition rows.  The image satisfies the positivity needed for
    certification only at orbit level, which exercises the window search.

    fullshift4: full shift on four symbols with an asymmetric transition,
    two-symbol image with two-element fibers; all certification hypotheses
    hold pointwise and the finite-range obstruction triple is all-false.

    nongibbs6: six symbols, doubly stochastic transition with parameter
    gamma in (1/4, 1/3), two-symbol image.  The induced potential diverges
    along the all-zeros tail, the standard non-Gibbs specimen.

    converse_false: four symbols, two-symbol image, fiber blocks with
    all-zero rows; the image is nevertheless a full shift to any inspected
    depth, showing the row condition is not necessary for a Markov image.
    """
    if example_id == "adhoc5":
        labels = ["1", "2", "3", "4", "5"]
        edges = {
            "1": ["2", "3", "4"],
            "2": ["1", "5"],
            "3": ["4"],
            "4": ["1", "5"],
            "5": ["2", "3", "4"],
        }
        incidence = [
            [1 if b in edges[a] else 0 for b in labels] for a in labels
        ]
        # generic edge weights: uniform rows would make every fiber block
        # rank one and the image measure exactly Markov
        weights = {
            "1": [0.5, 0.2, 0.3],
            "2": [0.6, 0.4],
            "3": [1.0],
            "4": [0.3, 0.7],
            "5": [0.25, 0.45, 0.3],
        }
        transition = [
            [
                weights[a][edges[a].index(b)] if b in edges[a] else 0.0
                for b in labels
            ]
            for a in labels
        ]
        projection = {"1": "a", "5": "a", "2": "b", "4": "b", "3": "c"}
        return {
            "alphabet": labels,
            "incidence": incidence,
            "transition": transition,
            "projection": projection,
        }
    if example_id == "fullshift4":
        labels = ["a", "b", "c", "d"]
        transition = [
            [0.40, 0.30, 0.20, 0.10],
            [0.10, 0.20, 0.30, 0.40],
            [0.30, 0.10, 0.40, 0.20],
            [0.20, 0.25, 0.15, 0.40],
        ]
        return {
            "alphabet": labels,
            "incidence": [[1] * 4 for _ in range(4)],
            "transition": transition,
            "projection": {"a": "0", "b": "0", "c": "1", "d": "1"},
        }
    if example_id == "nongibbs6":
        g = _check_gamma(GAMMA_DEFAULT if gamma is None else gamma)
        labels = ["a", "b", "c", "d", "e", "f"]
        #      a     b     c            d            e            f
        rows = [
            [0.0,  0.0,  2 * g,       g,           1 - 3 * g,   0.0],
            [0.0,  0.0,  g,           g,           0.0,         1 - 2 * g],
            [0.25, 0.25, 0.0,         0.0,         0.5,         0.0],
            [0.25, 0.25, 0.0,         0.0,         0.0,         0.5],
            [0.5,  0.0,  1 - 3 * g,   0.0,         3 * g - 0.5, 0.0],
            [0.0,  0.5,  0.0,         1 - 2 * g,   0.0,         2 * g - 0.5],
        ]
        incidence = [[1 if x > 0 else 0 for x in row] for row in rows]
        return {
            "alphabet": labels,
            "incidence": incidence,
            "transition": rows,
            "projection": {"a": "0", "b": "0", "c": "0", "d": "0", "e": "1", "f": "1"},
            "options": {"gamma": g},
        }
    if example_id == "converse_false":
        labels = ["a", "b", "c", "d"]
        edges = {"a": ["a", "b", "d"], "b": ["a", "b", "c"], "c": ["a"], "d": ["b"]}
        incidence = [
            [1 if b in edges[a] else 0 for b in labels] for a in labels
        ]
        transition = [
            [1.0 / len(edges[a]) if b in edges[a] else 0.0 for b in labels]
            for a in labels
        ]
        return {
            "alphabet": labels,
            "incidence": incidence,
            "transition": transition,
            "projection": {"a": "0", "c": "0", "b": "1", "d": "1"},
        }
    raise ModelError(f"unknown example {example_id!r}; choose from {EXAMPLES}")


def parse_model(doc: dict) -> FactorSystem:
    """Validate a model document and build the factor system."""
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    for key in ("alphabet", "incidence", "transition", "projection"):
        if key not in doc:
            raise ModelError(f"model document is missing {key!r}")
    labels = doc["alphabet"]
    if (
        not isinstance(labels, list)
        or not labels
        or not all(isinstance(x, str) for x in labels)
    ):
        raise ModelError("alphabet must be a nonempty list of strings")
    alphabet = Alphabet(labels)
    try:
        incidence = np.asarray(doc["incidence"], dtype=float)
        transition = np.asarray(doc["transition"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"matrices must be numeric arrays: {exc}") from exc
    tmc = Tmc(alphabet, incidence)
    model = MarkovModel(tmc, transition)
    mapping = doc["projection"]
    if not isinstance(mapping, dict):
        raise ModelError("projection must map source labels to target labels")
    missing = [x for x in labels if x not in mapping]
    if missing:
        raise ModelError(f"projection misses source symbols {missing}")
    extra = [x for x in mapping if x not in labels]
    if extra:
        raise ModelError(f"projection names unknown source symbols {extra}")
    projection = Projection.from_labels(tmc.alphabet, {k: str(v) for k, v in mapping.items()})
    options = doc.get("options", {})
    if options and not isinstance(options, dict):
        raise ModelError("options must be an object")
    if "gamma" in options:
        _check_gamma(options["gamma"])
    return build_factor_system(model, projection)


def load_model(path: str) -> FactorSystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelError(f"cannot read model file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path!r} is not valid JSON: {exc}") from exc
    return parse_model(doc)


def dump_document(doc: dict, path: Optional[str] = None) -> str:
    """Serialize a model document deterministically; write it when path given."""
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def example_system(example_id: str, gamma: Optional[float] = None) -> FactorSystem:
    return parse_model(expand_example(example_id, gamma=gamma))
