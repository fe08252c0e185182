"""
Update streams and verification reports
=======================================

A stream is a text file of insert/delete/query lines.  ``run`` replays it,
checks every answer against BFS, and returns NDJSON-ready records.  The same
flow is available as ``dyndist gen`` and ``dyndist verify``.
"""
import io

from dyndist.harness.generators import gen_stream
from dyndist.harness.runner import RunConfig, dumps, run, strip_timings
from dyndist.harness.stream import parse_stream

s = gen_stream("path-churn", 30, 60, seed=4, query="sssp 0")
text = s.dumps()
print(text.splitlines()[:4])

stream = parse_stream(io.StringIO(text))
records = run(RunConfig(stream=stream, eps=0.5, verify=True, seed=4))
summary = records[-1]
print("queries", summary["queries"], "failures", summary["failures"],
      "max ratio", summary["max_ratio"])

# timings are the only nondeterministic fields
again = run(RunConfig(stream=stream, eps=0.5, verify=True, seed=4))
print("replay identical:", dumps(strip_timings(records)) == dumps(strip_timings(again)))
