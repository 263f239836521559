"""
JSON covering descriptors and the [re, im] encoding of complex numbers.

Genus 0::

    {"genus": 0, "kind": "polynomial" | "laurent" | "rational", "N": int,
     "k": int (laurent only), "pole_profile": [ints], "params": [[re, im], ...]}

Genus 1::

    {"genus": 1, "N": int, "sigma": [re, im], "c0": [re, im], "c": [[re, im], ...]}
"""

from __future__ import annotations

import math
import numbers

import numpy as np

from .errors import DomainError
from .genus0 import CoveringG0
from .genus1 import CoveringG1


class DescriptorError(ValueError):
    """Malformed covering descriptor or sweep specification."""


def encode_complex(z):
    z = complex(z)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def decode_complex(v, what="value"):
    if isinstance(v, bool):
        raise DescriptorError(f"{what}: expected [re, im], got a boolean")
    if isinstance(v, numbers.Real):
        v = [v, 0.0]
    if not (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(x, numbers.Real) and not isinstance(x, bool) for x in v)):
        raise DescriptorError(f"{what}: expected [re, im], got {v!r}")
    if not all(math.isfinite(x) for x in v):
        raise DescriptorError(f"{what}: non-finite component")
    return complex(v[0], v[1])


def encode(obj):
    """Recursively replace complex numbers and arrays by JSON-ready lists."""
    if isinstance(obj, np.ndarray):
        return [encode(x) for x in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    return obj


def _int(d, key):
    v = d.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise DescriptorError(f"{key!r} must be an integer")
    return v


def parse_descriptor(d):
    """Covering object from a descriptor dict; raises DescriptorError."""
    if not isinstance(d, dict):
        raise DescriptorError("descriptor must be a JSON object")
    genus = d.get("genus")
    try:
        if genus == 0:
            kind = d.get("kind")
            N = _int(d, "N")
            params = [decode_complex(p, "params") for p in _list(d, "params")]
            if kind == "polynomial":
                return CoveringG0("polynomial", N, tuple(params))
            if kind == "laurent":
                return CoveringG0("laurent", N, tuple(params), k=_int(d, "k"))
            if kind == "rational":
                prof = _list(d, "pole_profile")
                if not all(isinstance(x, int) and not isinstance(x, bool) for x in prof):
                    raise DescriptorError("'pole_profile' must hold integers")
                return CoveringG0("rational", N, tuple(params), pole_profile=tuple(prof))
            raise DescriptorError(f"unknown kind {kind!r}")
        if genus == 1:
            N = _int(d, "N")
            c = [decode_complex(x, "c") for x in _list(d, "c")]
            if len(c) != N - 1:
                raise DescriptorError("'c' must hold c_2..c_N")
            return CoveringG1(decode_complex(d.get("sigma"), "sigma"),
                              decode_complex(d.get("c0"), "c0"), tuple(c))
    except DomainError as exc:
        raise DescriptorError(str(exc)) from exc
    raise DescriptorError(f"unknown genus {genus!r}")


def _list(d, key):
    v = d.get(key)
    if not isinstance(v, list):
        raise DescriptorError(f"{key!r} must be a list")
    return v


def to_descriptor(cover):
    """Descriptor dict of a covering (inverse of :func:`parse_descriptor`)."""
    if cover.genus == 1:
        return {"genus": 1, "N": cover.N, "sigma": encode_complex(cover.sigma),
                "c0": encode_complex(cover.c0), "c": [encode_complex(x) for x in cover.c]}
    out = {"genus": 0, "kind": cover.kind, "N": cover.N}
    if cover.kind == "laurent":
        out["k"] = cover.k
    out["pole_profile"] = list(cover.pole_profile)
    out["params"] = [encode_complex(p) for p in cover.params]
    return out
