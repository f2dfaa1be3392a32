"""Oriented link diagrams: data model, PD text format and Reidemeister moves."""

from .model import (
    IN, OI, OUT, UI, QUADRANT_LABELS, Annulus, Diagram, DiagramError, Face, Sphere, Torus,
    from_pd, quadrant_label, slot_is_in, slot_is_over, to_pd,
)
from .moves import (
    Move, MoveError, apply_move, bigons, connected_sum_split, monogons, r1_insert, r1_remove,
    r2_insert, r2_remove, r3, random_move_sequence, random_walk, replay, triangles,
)
from .pdformat import PDParseError, format_pd, parse_pd, read_pd


def faces(d: Diagram):
    return list(d.faces)


def writhe(d: Diagram) -> int:
    return d.writhe()


__all__ = [
    "IN", "OUT", "OI", "UI", "QUADRANT_LABELS", "Annulus", "Diagram", "DiagramError", "Face",
    "Move", "MoveError", "PDParseError", "Sphere", "Torus", "apply_move", "bigons",
    "connected_sum_split", "faces", "format_pd", "from_pd", "monogons", "parse_pd",
    "quadrant_label", "r1_insert", "r1_remove", "r2_insert", "r2_remove", "r3",
    "random_move_sequence", "random_walk", "read_pd", "replay", "slot_is_in", "slot_is_over",
    "to_pd", "triangles", "writhe",
]
