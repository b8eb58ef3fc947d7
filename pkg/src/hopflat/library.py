"""Built-in algebras, example models, and JSON (de)serialization.

The shipped models:

* ``torus_z2``      -- genus-1 graph with two vertices and four edges, one
                       bulk region over C[Z2] (extended space dim 16).
* ``torus_s3``      -- one vertex, two loops, over C[S3] (dim 36).
* ``square_cell_z2``-- planar 4-cycle over C[Z2] (dim 16); the workhorse for
                       the holonomy commutation checks.
* ``boundary_strip_z2`` -- square bulk ringed by an oriented boundary line,
                       boundary twist = the R-matrix of D(Z2) (dim 4096).
* ``defect_square_z2_transparent`` -- a closed defect ring (three ring
                       vertices, inner and outer spokes) between two Z2 bulk
                       regions carrying the transparent twist (dim 4096).
* ``defect_square_z2z2_nontrivial`` -- same ring shape, defect twist the
                       tensor of two copies of the R-matrix of D(Z2), whose
                       projections to either side are nontrivial (dim 4096).
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .errors import ConfigError, DomainError
from .graphs import DefectGraph, RibbonGraph, Site, ThickPath, Letter
from .groups import GROUP_TABLES
from .hopf import HopfAlgebra, drinfeld_double, group_algebra, tensor_hopf
from .model import ModelInstance
from .scalars import APPROX, EXACT, FIELDS
from .twists import Twist, r_matrix_twist, tensor_twist, transparent_twist


def fleet_algebra(name, field):
    """Group algebras of the test fleet by name (Z2, Z4, Z2xZ2, S3)."""
    if name not in GROUP_TABLES:
        raise ConfigError(f"unknown fleet algebra {name!r}")
    return group_algebra(name, GROUP_TABLES[name](), field)


# ---------------------------------------------------------------------------
# graphs


def torus_two_loop_graph():
    return RibbonGraph(
        vertices={"w": [("a", "s"), ("b", "s"), ("a", "t"), ("b", "t")]},
        edges={"a": ("w", "w"), "b": ("w", "w")},
    )


def torus_four_edge_graph():
    return RibbonGraph(
        vertices={
            "u": [("h1", "s"), ("m1", "s"), ("h2", "t"), ("m1", "t")],
            "v": [("h2", "s"), ("m2", "s"), ("h1", "t"), ("m2", "t")],
        },
        edges={"h1": ("u", "v"), "h2": ("v", "u"),
               "m1": ("u", "u"), "m2": ("v", "v")},
    )


def square_cell_graph():
    return RibbonGraph(
        vertices={
            "v1": [("e1", "s"), ("e4", "t")],
            "v2": [("e2", "s"), ("e1", "t")],
            "v3": [("e3", "s"), ("e2", "t")],
            "v4": [("e4", "s"), ("e3", "t")],
        },
        edges={"e1": ("v1", "v2"), "e2": ("v2", "v3"),
               "e3": ("v3", "v4"), "e4": ("v4", "v1")},
    )


def boundary_strip_graph():
    vertices = {}
    edges = {}
    for i in range(1, 5):
        j = i % 4 + 1
        prev = (i - 2) % 4 + 1
        edges[f"k{i}"] = (f"s{i}", f"s{j}")
        edges[f"a{i}"] = (f"w{i}", f"w{j}")
        edges[f"r{i}"] = (f"s{i}", f"w{i}")
        vertices[f"s{i}"] = [(f"k{i}", "s"), (f"k{prev}", "t"), (f"r{i}", "s")]
        vertices[f"w{i}"] = [(f"a{i}", "s"), (f"r{i}", "t"), (f"a{prev}", "t")]
    return RibbonGraph(vertices, edges)


def defect_ring_graph():
    """Closed two-vertex defect ring around a triangular inner bulk.

    The inner region has three vertices and an enclosed face away from the
    line, so it owns triples of pairwise disjoint sites (needed by the
    transport associativity checks); the outer bulk is a single hub.
    """
    vertices = {
        "v1": [("d2", "t"), ("o1", "s"), ("d1", "s"), ("i1", "t")],
        "v2": [("d2", "s"), ("i2", "t"), ("d1", "t"), ("o2", "s")],
        "p1": [("c3", "s"), ("i1", "s"), ("c1", "s")],
        "p2": [("c3", "t"), ("c2", "t"), ("i2", "s")],
        "p3": [("c2", "s"), ("c1", "t")],
        "q": [("o1", "t"), ("o2", "t")],
    }
    edges = {
        "d1": ("v1", "v2"), "d2": ("v2", "v1"),
        "i1": ("p1", "v1"), "i2": ("p2", "v2"),
        "c1": ("p1", "p3"), "c2": ("p3", "p2"), "c3": ("p1", "p2"),
        "o1": ("v1", "q"), "o2": ("v2", "q"),
    }
    return RibbonGraph(vertices, edges)


# ---------------------------------------------------------------------------
# model builders


def build_model(name, field=EXACT):
    builders = {
        "torus_z2": _build_torus_z2,
        "torus_s3": _build_torus_s3,
        "square_cell_z2": _build_square_cell_z2,
        "boundary_strip_z2": _build_boundary_strip_z2,
        "defect_square_z2_transparent": _build_defect_transparent,
        "defect_square_z2z2_nontrivial": _build_defect_nontrivial,
    }
    if name not in builders:
        raise ConfigError(f"unknown library model {name!r}")
    return builders[name](field)


MODEL_NAMES = ("torus_z2", "torus_s3", "square_cell_z2", "boundary_strip_z2",
               "defect_square_z2_transparent", "defect_square_z2z2_nontrivial")


def _build_torus_z2(field):
    g = torus_four_edge_graph()
    dg = DefectGraph(g, bulk={"b0": ["h1", "h2", "m1", "m2"]})
    return ModelInstance(dg, {"b0": fleet_algebra("Z2", field)}, name="torus_z2")


def _build_torus_s3(field):
    g = torus_two_loop_graph()
    dg = DefectGraph(g, bulk={"b0": ["a", "b"]})
    return ModelInstance(dg, {"b0": fleet_algebra("S3", field)}, name="torus_s3")


def _build_square_cell_z2(field):
    g = square_cell_graph()
    dg = DefectGraph(g, bulk={"b0": ["e1", "e2", "e3", "e4"]})
    return ModelInstance(dg, {"b0": fleet_algebra("Z2", field)},
                         name="square_cell_z2")


def _build_boundary_strip_z2(field):
    g = boundary_strip_graph()
    bulk_edges = [f"k{i}" for i in range(1, 5)] + [f"r{i}" for i in range(1, 5)]
    dg = DefectGraph(g, bulk={"b0": bulk_edges},
                     boundary=[("a0", ["a1", "a2", "a3", "a4"], "b0")])
    H = fleet_algebra("Z2", field)
    D = drinfeld_double(H)
    return ModelInstance(dg, {"b0": H},
                         boundary_twists={"a0": r_matrix_twist(D)},
                         name="boundary_strip_z2", doubles={"b0": D})


def _ring_defect_graph():
    g = defect_ring_graph()
    return g, DefectGraph(
        g,
        bulk={"bI": ["i1", "i2", "c1", "c2", "c3"], "bO": ["o1", "o2"]},
        defect=[("d0", ["d1", "d2"], "bI", "bO")],
    )


def _build_defect_transparent(field):
    _, dg = _ring_defect_graph()
    H = fleet_algebra("Z2", field)
    D = drinfeld_double(H)
    KK = tensor_hopf(D, D)
    tw, _, _, _ = transparent_twist(D, KK=KK)
    return ModelInstance(dg, {"bI": H, "bO": H}, defect_twists={"d0": tw},
                         name="defect_square_z2_transparent",
                         doubles={"bI": D, "bO": D},
                         defect_algebras={"d0": KK})


def _build_defect_nontrivial(field):
    _, dg = _ring_defect_graph()
    H = fleet_algebra("Z2", field)
    D = drinfeld_double(H)
    KK = tensor_hopf(D, D)
    tw = tensor_twist(KK, r_matrix_twist(D), r_matrix_twist(D), name="R(x)R")
    return ModelInstance(dg, {"bI": H, "bO": H}, defect_twists={"d0": tw},
                         name="defect_square_z2z2_nontrivial",
                         doubles={"bI": D, "bO": D},
                         defect_algebras={"d0": KK})


# ---------------------------------------------------------------------------
# deterministic path search (used to pin check instances)


def site_letters(graph):
    """All letters grouped by source site, in a fixed order."""
    out = {}
    for e in sorted(graph.edges):
        for kind in "stLR":
            for sign in (1, -1):
                l = Letter(e, kind, sign)
                src, _ = graph.letter_endpoints(l)
                out.setdefault(src, []).append(l)
    return out


def find_paths(model, start, end, max_len=6, start_side=None, end_side=None,
               require_simple=True, require_permissible=True, limit=1,
               predicate=None):
    """Breadth-first enumeration of admissible words from site to site.

    Deterministic: letters are extended in lexicographic order, so the first
    hit is reproducible.  Used to pin curated instances per model.
    """
    g = model.graph
    by_src = site_letters(g)
    found = []
    frontier = [()]
    for _ in range(max_len):
        new = []
        for word in frontier:
            src = g.letter_endpoints(word[-1])[1] if word else start
            for l in by_src.get(src, []):
                if word and word[-1] == l.inverse():
                    continue
                w2 = word + (l,)
                try:
                    p = ThickPath(g, w2, reduce=False)
                except Exception:
                    continue
                if require_permissible and not model.is_permissible(p):
                    continue
                new.append(w2)
                if g.letter_endpoints(l)[1] != end:
                    continue
                if start_side == "L" and not p.starts_left:
                    continue
                if start_side == "R" and not p.starts_right:
                    continue
                if end_side == "L" and not p.ends_left:
                    continue
                if end_side == "R" and not p.ends_right:
                    continue
                if require_simple and not p.is_simple():
                    continue
                if predicate is not None and not predicate(p):
                    continue
                found.append(p)
                if len(found) >= limit:
                    return found
        frontier = new
    return found


# ---------------------------------------------------------------------------
# JSON serialization

MODEL_SCHEMA = {
    "type": "object",
    "required": ["name", "scalars", "graph", "algebras"],
    "properties": {
        "name": {"type": "string"},
        "scalars": {"enum": ["exact", "approx"]},
        "graph": {
            "type": "object",
            "required": ["vertices", "edges", "regions"],
            "properties": {
                "vertices": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id", "cyclic_order", "cilium_index"],
                        "properties": {
                            "id": {"type": "string"},
                            "cyclic_order": {
                                "type": "array",
                                "items": {"type": "string",
                                          "pattern": "^[A-Za-z0-9_]+:[st]$"},
                            },
                            "cilium_index": {"type": "integer", "minimum": 0},
                        },
                    },
                },
                "edges": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id", "src", "dst"],
                        "properties": {"id": {"type": "string"},
                                       "src": {"type": "string"},
                                       "dst": {"type": "string"}},
                    },
                },
                "regions": {
                    "type": "object",
                    "required": ["bulk"],
                    "properties": {
                        "bulk": {"type": "object"},
                        "boundary": {"type": "array", "items": {
                            "type": "object",
                            "required": ["id", "cycle", "bulk"],
                        }},
                        "defect": {"type": "array", "items": {
                            "type": "object",
                            "required": ["id", "cycle", "left", "right"],
                        }},
                    },
                },
            },
        },
        "algebras": {"type": "object"},
        "twists": {"type": "object"},
    },
}


def algebra_to_json(H):
    field = H.field
    if getattr(H, "group_table", None) is not None:
        return {"group_table": H.group_table, "name": H.name}
    sc = field.to_json
    return {
        "name": H.name,
        "dim": H.dim,
        "mult": [[{str(k): sc(c) for k, c in H.mult[i][j].items()}
                  for j in range(H.dim)] for i in range(H.dim)],
        "unit": {str(k): sc(c) for k, c in H.unit.items()},
        "comult": [[[i2, j2, sc(c)] for (i2, j2), c in H.comult[i].items()]
                   for i in range(H.dim)],
        "counit": [sc(c) for c in H.counit],
        "antipode": [{str(k): sc(c) for k, c in H.antipode[i].items()}
                     for i in range(H.dim)],
        "r_matrix": None if H.r_matrix is None else
                    [[i2, j2, sc(c)] for (i2, j2), c in H.r_matrix.items()],
    }


def algebra_from_json(spec, field):
    if isinstance(spec, str):
        return fleet_algebra(spec, field)
    if "group_table" in spec:
        H = group_algebra(spec.get("name", "G"), spec["group_table"], field)
        H.group_table = spec["group_table"]
        return H
    sc = field.from_json
    n = spec["dim"]
    mult = [[{int(k): sc(c) for k, c in spec["mult"][i][j].items()}
             for j in range(n)] for i in range(n)]
    unit = {int(k): sc(c) for k, c in spec["unit"].items()}
    comult = [{(i2, j2): sc(c) for i2, j2, c in spec["comult"][i]}
              for i in range(n)]
    counit = [sc(c) for c in spec["counit"]]
    antipode = [{int(k): sc(c) for k, c in spec["antipode"][i].items()}
                for i in range(n)]
    r = spec.get("r_matrix")
    r_matrix = None if r is None else {(i2, j2): sc(c) for i2, j2, c in r}
    return HopfAlgebra(spec.get("name", "H"), field, n, mult, unit, comult,
                       counit, antipode, r_matrix=r_matrix)


def twist_to_json(tw):
    if tw.is_trivial:
        return "trivial"
    if tw.name == "transparent":
        return "transparent"
    sc = tw.algebra.field.to_json
    return {"tensor": [[i, j, sc(c)] for (i, j), c in sorted(tw.tensor.items())],
            "inverse": [[i, j, sc(c)] for (i, j), c in sorted(tw.inverse.items())]}


def twist_from_json(spec, algebra, doubles_for_transparent=None):
    if spec == "trivial":
        return Twist.trivial(algebra)
    if spec == "transparent":
        D = doubles_for_transparent
        if D is None:
            raise ConfigError("transparent twist needs a defect algebra context")
        tw, _, _, _ = transparent_twist(D, KK=algebra)
        return tw
    sc = algebra.field.from_json
    tensor = {(i, j): sc(c) for i, j, c in spec["tensor"]}
    inverse = None
    if "inverse" in spec:
        inverse = {(i, j): sc(c) for i, j, c in spec["inverse"]}
    return Twist(algebra, tensor, inverse=inverse)


def model_to_json(model):
    g = model.graph
    dg = model.dg
    return {
        "name": model.name,
        "scalars": model.field.name,
        "graph": {
            "vertices": [{"id": v,
                          "cyclic_order": [f"{e}:{w}" for e, w in ends],
                          "cilium_index": 0}
                         for v, ends in sorted(g.vertices.items())],
            "edges": [{"id": e, "src": s, "dst": t}
                      for e, (s, t) in sorted(g.edges.items())],
            "regions": {
                "bulk": {b: sorted(es) for b, es in dg.bulk.items()},
                "boundary": [{"id": a, "cycle": list(line.cycle),
                              "bulk": dg.boundary_bulk[a]}
                             for a, line in sorted(dg.boundary.items())],
                "defect": [{"id": d, "cycle": list(line.cycle),
                            "left": dg.defect_bulks[d][0],
                            "right": dg.defect_bulks[d][1]}
                           for d, line in sorted(dg.defect.items())],
                "extra_bulk_vertices": {b: sorted(vs) for b, vs in
                                        dg.extra_bulk_vertices.items()},
            },
        },
        "algebras": {b: algebra_to_json(H)
                     for b, H in model.bulk_algebras.items()},
        "twists": {
            "boundary": {a: twist_to_json(tw)
                         for a, tw in model.boundary_twists.items()},
            "defect": {d: twist_to_json(tw)
                       for d, tw in model.defect_twists.items()},
        },
    }


def model_from_json(doc, field=None):
    try:
        jsonschema.validate(doc, MODEL_SCHEMA)
    except jsonschema.ValidationError as exc:
        pointer = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"config invalid at {pointer}: {exc.message}") from None
    field = field or FIELDS[doc["scalars"]]
    gspec = doc["graph"]
    vertices = {}
    for v in gspec["vertices"]:
        ends = []
        for token in v["cyclic_order"]:
            e, w = token.split(":")
            ends.append((e, w))
        cut = v["cilium_index"]
        if not 0 <= cut <= max(0, len(ends) - 1):
            raise ConfigError(f"vertex {v['id']}: cilium index out of range")
        vertices[v["id"]] = ends[cut:] + ends[:cut]
    edges = {e["id"]: (e["src"], e["dst"]) for e in gspec["edges"]}
    graph = RibbonGraph(vertices, edges)
    regions = gspec["regions"]
    dg = DefectGraph(
        graph,
        bulk=regions["bulk"],
        boundary=[(a["id"], a["cycle"], a["bulk"])
                  for a in regions.get("boundary", ())],
        defect=[(d["id"], d["cycle"], d["left"], d["right"])
                for d in regions.get("defect", ())],
        extra_bulk_vertices=regions.get("extra_bulk_vertices", {}),
    )
    shared = {}
    algebras = {}
    for b, spec in doc["algebras"].items():
        key = json.dumps(spec, sort_keys=True)
        if key not in shared:
            shared[key] = algebra_from_json(spec, field)
        algebras[b] = shared[key]

    doubles = {b: drinfeld_double(H) for b, H in algebras.items()}
    twists = doc.get("twists", {})
    boundary_twists = {}
    for a, spec in twists.get("boundary", {}).items():
        b = dg.boundary_bulk[a]
        boundary_twists[a] = twist_from_json(spec, doubles[b])
    defect_twists = {}
    defect_algebras = {d: tensor_hopf(doubles[bl], doubles[br])
                       for d, (bl, br) in dg.defect_bulks.items()}
    for d, spec in twists.get("defect", {}).items():
        bl, _ = dg.defect_bulks[d]
        defect_twists[d] = twist_from_json(spec, defect_algebras[d],
                                           doubles_for_transparent=doubles[bl])
    return ModelInstance(dg, algebras, boundary_twists, defect_twists,
                          name=doc["name"], doubles=doubles,
                          defect_algebras=defect_algebras)


def load_model(path, field=None):
    """Parse, schema-validate, and semantically validate a model file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON: {exc}") from None
    return model_from_json(doc, field)


def write_library(directory, field=EXACT):
    """Write all built-in models as JSON files; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in MODEL_NAMES:
        model = build_model(name, field)
        path = directory / f"{name}.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(model_to_json(model), fh, indent=1, sort_keys=True)
            fh.write("\n")
        paths.append(path)
    return paths
