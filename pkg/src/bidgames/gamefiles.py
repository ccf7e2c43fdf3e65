"""Canonical JSON file formats for games and auction reward tables.

Game files:

    {"vertices": [{"id": "v1", "weight": "1", "parity": 2}, ...],
     "edges": [["v1", "v2"], ...]}

Weights are exact rational strings (decimal or "p/q"); binary floating
point never appears in files.  Saving always produces the canonical form:
vertices sorted by id, edges sorted lexicographically, keys in a fixed
order, so identical games yield byte-identical files.

Auction reward files:

    {"slots": 2, "reward": {"00": "0", "01": "1/2", ...}}
"""

from __future__ import annotations

import json
from pathlib import Path

from .auctions import AuctionSpec
from .graphs import GameGraph, validate
from .ratios import format_rational, parse_rational


def game_to_obj(graph: GameGraph) -> dict:
    vertices = []
    for v in graph.vertices:
        entry: dict[str, object] = {"id": v, "weight": format_rational(graph.weight[v])}
        if v in graph.parity:
            entry["parity"] = graph.parity[v]
        vertices.append(entry)
    edges = sorted([u, w] for u, w in graph.edge_list())
    return {"vertices": vertices, "edges": edges}


def game_from_obj(obj: dict) -> GameGraph:
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise ValueError("game object needs 'vertices' and 'edges'")
    ids = []
    weights = {}
    parity = {}
    for entry in obj["vertices"]:
        vid = str(entry["id"])
        ids.append(vid)
        weights[vid] = parse_rational(entry.get("weight", "0"))
        if "parity" in entry:
            parity[vid] = int(entry["parity"])
    edges = [(str(u), str(w)) for u, w in obj["edges"]]
    declared = set(ids)
    for u, w in edges:
        if u not in declared or w not in declared:
            raise ValueError(f"edge {u!r}->{w!r} mentions an undeclared vertex")
    graph = GameGraph.build(ids, edges, weights, parity)
    validate(graph)
    return graph


def save_game(graph: GameGraph, path: str | Path) -> None:
    Path(path).write_text(dumps_game(graph))


def dumps_game(graph: GameGraph) -> str:
    return json.dumps(game_to_obj(graph), indent=2, sort_keys=False) + "\n"


def load_game(path: str | Path) -> GameGraph:
    return game_from_obj(json.loads(Path(path).read_text()))


def auction_spec_to_obj(spec: AuctionSpec) -> dict:
    return {
        "slots": spec.slots,
        "reward": {bits: format_rational(r) for bits, r in sorted(spec.reward.items())},
    }


def auction_spec_from_obj(obj: dict) -> AuctionSpec:
    slots = int(obj["slots"])
    reward = {str(bits): parse_rational(r) for bits, r in obj.get("reward", {}).items()}
    return AuctionSpec(slots=slots, reward=reward)


def load_auction_spec(path: str | Path) -> AuctionSpec:
    return auction_spec_from_obj(json.loads(Path(path).read_text()))


def save_auction_spec(spec: AuctionSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(auction_spec_to_obj(spec), indent=2) + "\n")
