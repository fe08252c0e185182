"""Line-oriented update streams.

::

    n 6 u          header: node count, d(irected) or u(ndirected)
    + 0 1          insert edge
    - 0 1          delete edge
    ? st 0 5       query; kinds: st s t, sssp s, mssp s1,s2,..., apsp, diam, xst s t

Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from ..errors import StreamError

QUERY_KINDS = ("st", "sssp", "mssp", "apsp", "diam", "xst")


@dataclass(frozen=True)
class Insert:
    u: int
    v: int

    def line(self) -> str:
        return f"+ {self.u} {self.v}"


@dataclass(frozen=True)
class Delete:
    u: int
    v: int

    def line(self) -> str:
        return f"- {self.u} {self.v}"


@dataclass(frozen=True)
class Query:
    kind: str
    args: tuple[int, ...] = ()

    def line(self) -> str:
        if self.kind == "mssp":
            return f"? mssp {','.join(map(str, self.args))}"
        return " ".join(["?", self.kind, *map(str, self.args)])


Event = Insert | Delete | Query


@dataclass
class UpdateStream:
    n: int
    directed: bool = False
    events: list[Event] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def updates(self) -> list[Event]:
        return [e for e in self.events if not isinstance(e, Query)]

    def dumps(self) -> str:
        head = f"n {self.n} {'d' if self.directed else 'u'}"
        return "\n".join([head] + [e.line() for e in self.events]) + "\n"

    def write(self, fp: IO[str]) -> None:
        fp.write(self.dumps())

    def validate(self) -> None:
        """Raise StreamError at the first event that is invalid for the running graph."""
        present: set[tuple[int, int]] = set()
        for i, e in enumerate(self.events):
            check_event(e, self.n, i)
            if isinstance(e, Query):
                continue
            key = _edge_key(e.u, e.v, self.directed)
            if isinstance(e, Insert):
                if key in present:
                    raise StreamError(f"duplicate insert of ({e.u}, {e.v})", i)
                present.add(key)
            else:
                if key not in present:
                    raise StreamError(f"delete of missing edge ({e.u}, {e.v})", i)
                present.discard(key)


def _edge_key(u: int, v: int, directed: bool) -> tuple[int, int]:
    return (u, v) if directed or u < v else (v, u)


def check_event(e: Event, n: int, index: int) -> None:
    if isinstance(e, Query):
        if e.kind not in QUERY_KINDS:
            raise StreamError(f"unknown query kind {e.kind!r}", index)
        nodes = e.args
        arity = {"st": 2, "xst": 2, "sssp": 1, "apsp": 0, "diam": 0}.get(e.kind)
        if arity is not None and len(nodes) != arity:
            raise StreamError(f"query {e.kind} takes {arity} node(s)", index)
        if e.kind == "mssp" and not nodes:
            raise StreamError("mssp needs at least one source", index)
    else:
        nodes = (e.u, e.v)
        if e.u == e.v:
            raise StreamError(f"self-loop at {e.u}", index)
    for x in nodes:
        if not 0 <= x < n:
            raise StreamError(f"node {x} outside [0, {n})", index)


def parse_event(line: str, index: int) -> Event:
    parts = line.split()
    try:
        if parts[0] in "+-":
            if len(parts) != 3:
                raise ValueError
            u, v = int(parts[1]), int(parts[2])
            return Insert(u, v) if parts[0] == "+" else Delete(u, v)
        if parts[0] == "?":
            kind = parts[1]
            if kind == "mssp":
                if len(parts) != 3:
                    raise ValueError
                args = tuple(int(x) for x in parts[2].split(","))
            else:
                args = tuple(int(x) for x in parts[2:])
            return Query(kind, args)
    except (ValueError, IndexError):
        pass
    raise StreamError(f"malformed line {line!r}", index)


def parse_stream(lines: Iterable[str], validate: bool = True) -> UpdateStream:
    stream = None
    index = 0
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if stream is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "n" or parts[2] not in ("d", "u"):
                raise StreamError(f"bad header {line!r}, expected 'n <N> <d|u>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise StreamError(f"bad node count {parts[1]!r}") from None
            stream = UpdateStream(n, parts[2] == "d")
            continue
        stream.events.append(parse_event(line, index))
        index += 1
    if stream is None:
        raise StreamError("empty stream, missing header")
    if validate:
        stream.validate()
    return stream


def loads(text: str, validate: bool = True) -> UpdateStream:
    return parse_stream(text.splitlines(), validate)


def load(path: str, validate: bool = True) -> UpdateStream:
    with open(path) as fp:
        return parse_stream(fp, validate)
