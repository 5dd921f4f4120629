"""JSON matroid descriptions.

A document is an object with a ``construction`` tag and tag-specific fields.
Subsets are always arrays of element labels.  Validation errors carry a JSON
path such as ``$.sets[2][0]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import constructions as C
from .core import DEFAULT_CAP, GroundSet, Matroid
from .errors import InvalidArgumentError

TAGS = (
    "uniform", "rank_table", "circuits", "flat_list", "graphic",
    "transversal", "gammoid", "strict_gammoid", "family_mn", "corpus",
)

_FIELDS = {
    "uniform": ("k", "n"),
    "rank_table": ("ground", "ranks"),
    "circuits": ("ground", "circuits"),
    "flat_list": ("ground", "flats"),
    "graphic": ("vertices", "edges"),
    "transversal": ("ground", "sets"),
    "gammoid": ("vertices", "edges", "n1", "n2"),
    "strict_gammoid": ("vertices", "edges", "n2"),
    "family_mn": ("n",),
    "corpus": ("name",),
}
_OPTIONAL = {"name", "cap"}
_TAG_OPTIONAL = {"uniform": {"labels"}, "graphic": {"edge_labels"}}


class DocumentError(InvalidArgumentError):
    def __init__(self, path, msg):
        self.path = path
        super().__init__(f"{path}: {msg}")


def _int(obj, key, path, lo=None):
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise DocumentError(f"{path}.{key}", "expected an integer")
    if lo is not None and v < lo:
        raise DocumentError(f"{path}.{key}", f"must be >= {lo}")
    return v


def _labels(v, path):
    if not isinstance(v, list):
        raise DocumentError(path, "expected an array of labels")
    out = []
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            raise DocumentError(f"{path}[{i}]", "labels must be strings or integers")
        out.append(str(x))
    return out


def _subsets(v, path, known):
    if not isinstance(v, list):
        raise DocumentError(path, "expected an array of subsets")
    out = []
    for i, s in enumerate(v):
        labs = _labels(s, f"{path}[{i}]")
        for j, x in enumerate(labs):
            if x not in known:
                raise DocumentError(f"{path}[{i}][{j}]", f"unknown label {x!r}")
        out.append(labs)
    return out


def _pairs(v, path, known):
    if not isinstance(v, list):
        raise DocumentError(path, "expected an array of [tail, head] pairs")
    out = []
    for i, e in enumerate(v):
        labs = _labels(e, f"{path}[{i}]")
        if len(labs) != 2:
            raise DocumentError(f"{path}[{i}]", "an edge has exactly two endpoints")
        for j, x in enumerate(labs):
            if x not in known:
                raise DocumentError(f"{path}[{i}][{j}]", f"unknown vertex {x!r}")
        out.append(tuple(labs))
    return out


def _unique(labs, path):
    seen = set()
    for i, x in enumerate(labs):
        if x in seen:
            raise DocumentError(f"{path}[{i}]", f"duplicate label {x!r}")
        seen.add(x)
    return labs


@dataclass(frozen=True)
class MatroidDocument:
    """A validated construction record; :meth:`build` makes the matroid."""

    tag: str
    data: dict

    @classmethod
    def parse(cls, obj, path="$"):
        if not isinstance(obj, dict):
            raise DocumentError(path, "a matroid document must be a JSON object")
        tag = obj.get("construction")
        if tag not in TAGS:
            raise DocumentError(f"{path}.construction", f"expected one of {', '.join(TAGS)}")
        allowed = set(_FIELDS[tag]) | _OPTIONAL | _TAG_OPTIONAL.get(tag, set()) | {"construction"}
        for key in obj:
            if key not in allowed:
                raise DocumentError(f"{path}.{key}", f"unexpected field for {tag!r}")
        for key in _FIELDS[tag]:
            if key not in obj:
                raise DocumentError(f"{path}.{key}", "missing required field")
        data = {k: obj[k] for k in obj if k != "construction"}
        if "cap" in data:
            _int(data, "cap", path, lo=0)
        if "name" in data and not isinstance(data["name"], str):
            raise DocumentError(f"{path}.name", "expected a string")
        getattr(cls, f"_check_{tag}")(data, path)
        return cls(tag, data)

    @classmethod
    def loads(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
        return cls.parse(obj)

    # -- per-tag validation ----------------------------------------------

    @staticmethod
    def _check_uniform(d, path):
        k = _int(d, "k", path, lo=0)
        n = _int(d, "n", path, lo=0)
        if k > n:
            raise DocumentError(f"{path}.k", "k must not exceed n")
        if "labels" in d:
            labs = _unique(_labels(d["labels"], f"{path}.labels"), f"{path}.labels")
            if len(labs) != n:
                raise DocumentError(f"{path}.labels", f"expected {n} labels")

    @staticmethod
    def _check_rank_table(d, path):
        ground = _unique(_labels(d["ground"], f"{path}.ground"), f"{path}.ground")
        ranks = d["ranks"]
        if not isinstance(ranks, list) or len(ranks) != 1 << len(ground):
            raise DocumentError(f"{path}.ranks", f"expected an array of 2^{len(ground)} integers")
        for i, r in enumerate(ranks):
            if not isinstance(r, int) or isinstance(r, bool):
                raise DocumentError(f"{path}.ranks[{i}]", "expected an integer")

    @staticmethod
    def _check_ground_subsets(d, path, key):
        ground = _unique(_labels(d["ground"], f"{path}.ground"), f"{path}.ground")
        _subsets(d[key], f"{path}.{key}", set(ground))

    @classmethod
    def _check_circuits(cls, d, path):
        cls._check_ground_subsets(d, path, "circuits")

    @classmethod
    def _check_flat_list(cls, d, path):
        cls._check_ground_subsets(d, path, "flats")

    @classmethod
    def _check_transversal(cls, d, path):
        cls._check_ground_subsets(d, path, "sets")

    @staticmethod
    def _check_graphic(d, path):
        vs = _unique(_labels(d["vertices"], f"{path}.vertices"), f"{path}.vertices")
        edges = _pairs(d["edges"], f"{path}.edges", set(vs))
        if "edge_labels" in d:
            labs = _unique(_labels(d["edge_labels"], f"{path}.edge_labels"), f"{path}.edge_labels")
            if len(labs) != len(edges):
                raise DocumentError(f"{path}.edge_labels", "must match the number of edges")

    @staticmethod
    def _check_gammoid(d, path):
        vs = _unique(_labels(d["vertices"], f"{path}.vertices"), f"{path}.vertices")
        known = set(vs)
        _pairs(d["edges"], f"{path}.edges", known)
        for key in ("n1", "n2"):
            if key in d:
                labs = _unique(_labels(d[key], f"{path}.{key}"), f"{path}.{key}")
                for i, x in enumerate(labs):
                    if x not in known:
                        raise DocumentError(f"{path}.{key}[{i}]", f"unknown vertex {x!r}")

    _check_strict_gammoid = _check_gammoid

    @staticmethod
    def _check_family_mn(d, path):
        _int(d, "n", path, lo=0)

    @staticmethod
    def _check_corpus(d, path):
        from .verify import corpus_names
        if d["name"] not in corpus_names():
            raise DocumentError(f"{path}.name", f"unknown corpus entry; known: {', '.join(corpus_names())}")

    # -- building --------------------------------------------------------

    def build(self, validate=True) -> Matroid:
        """Build the matroid.  ``validate=False`` only affects ``rank_table``,
        so that a table breaking the axioms can still be inspected."""
        d = self.data
        cap = d.get("cap", DEFAULT_CAP)
        name = d.get("name")
        t = self.tag
        if t == "uniform":
            m = C.uniform(d["k"], d["n"], labels=d.get("labels"), cap=cap)
        elif t == "rank_table":
            if validate:
                m = C.from_rank_table(d["ranks"], labels=[str(x) for x in d["ground"]], cap=cap, name=name)
            else:
                m = Matroid(GroundSet(tuple(d["ground"]), cap=cap), d["ranks"], name=name)
        elif t == "circuits":
            m = C.from_circuits(d["ground"], d["circuits"], name=name, cap=cap)
        elif t == "flat_list":
            m = C.from_flat_list(d["ground"], d["flats"], name=name, cap=cap)
        elif t == "transversal":
            m = C.transversal(C.SetSystemPresentation.from_labels(d["ground"], d["sets"], cap=cap), name=name)
        elif t == "graphic":
            g = C.UndirectedGraphInput(tuple(d["vertices"]), tuple(tuple(e) for e in d["edges"]),
                                       tuple(d["edge_labels"]) if "edge_labels" in d else None)
            m = C.graphic(g, name=name, cap=cap)
        elif t == "gammoid":
            p = C.DigraphPresentation(tuple(d["vertices"]), tuple(tuple(e) for e in d["edges"]),
                                      tuple(d["n1"]), tuple(d["n2"]))
            m = C.gammoid(p, name=name, cap=cap)
        elif t == "strict_gammoid":
            m = C.strict_gammoid(d["vertices"], [tuple(e) for e in d["edges"]], d["n2"], name=name, cap=cap)
        elif t == "family_mn":
            m = C.family_Mn(d["n"])
        else:
            from .verify import get_entry
            m = get_entry(d["name"]).matroid
        return m

    def to_json(self) -> dict:
        return {"construction": self.tag, **self.data}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)


def rank_table_document(m: Matroid, name=None) -> MatroidDocument:
    """Serialize any matroid as an explicit rank table."""
    data = {"ground": list(m.ground.labels), "ranks": [int(x) for x in m.table]}
    if name or m.name:
        data["name"] = name or m.name
    return MatroidDocument("rank_table", data)


EXAMPLES = {
    "uniform": {"construction": "uniform", "k": 2, "n": 4},
    "rank_table": {"construction": "rank_table", "ground": ["a", "b"], "ranks": [0, 1, 1, 1]},
    "circuits": {"construction": "circuits", "ground": ["a", "b", "c", "d"],
                 "circuits": [["a", "b", "c"], ["a", "b", "d"], ["a", "c", "d"], ["b", "c", "d"]]},
    "flat_list": {"construction": "flat_list", "ground": ["a", "b", "c"],
                  "flats": [[], ["a"], ["b"], ["c"], ["a", "b", "c"]]},
    "graphic": {"construction": "graphic", "vertices": ["1", "2", "3"],
                "edges": [["1", "2"], ["2", "3"], ["1", "3"]]},
    "transversal": {"construction": "transversal", "ground": ["1", "2", "3", "4", "5", "6"],
                    "sets": [["1", "2"], ["3", "4"], ["5", "6"], ["1", "3", "5"]]},
    "gammoid": {"construction": "gammoid", "vertices": ["a", "b", "c", "t"],
                "edges": [["a", "t"], ["b", "t"]], "n1": ["a", "b", "c"], "n2": ["t", "c"]},
    "strict_gammoid": {"construction": "strict_gammoid", "vertices": ["a", "b", "c"],
                       "edges": [["a", "b"]], "n2": ["b"]},
    "family_mn": {"construction": "family_mn", "n": 5},
    "corpus": {"construction": "corpus", "name": "matroidY"},
}
