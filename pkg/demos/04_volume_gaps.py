"""
Searching the forbidden volumes
===============================

List the volumes that no Steiner t-(v,t+1) trade can have, then confirm the
small cases by exhaustive search and keep a record of each run.
"""

import tempfile
from pathlib import Path

from tradelab import SearchSpec, enumerate_trades, forbidden_volumes, verify_gaps
from tradelab.search import append_ledger, write_witnesses

for t in (2, 3, 4):
    print(f"t={t}:", forbidden_volumes(t))

# The smallest Steiner 2-(v,3) trade is unique.
out = enumerate_trades(SearchSpec(2, 3, 4, "steiner"))
print(out.status, out.witness_count, "class in", out.nodes_visited, "nodes")

# Volume 5 is impossible even with repeated blocks.
out5 = enumerate_trades(SearchSpec(2, 3, 5, "general"))
print("s=5 general:", out5.status)

# All four gaps at t=3, including s=13.
report = verify_gaps(3)
for s, status in report.statuses.items():
    print(f"  s={s}: {status}")
print("verdict:", report.verdict)

# A budget that is too small never claims emptiness.
print("budget 1:", verify_gaps(3, budget=1).verdict)

# Witnesses and ledger lines, as the command line tool writes them.
work = Path(tempfile.mkdtemp())
files = write_witnesses(out, work)
print(append_ledger(work / "ledger.txt", out, files))
print(append_ledger(work / "ledger.txt", out5))
