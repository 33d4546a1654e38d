"""
A seeded sweep
==============

The experiment runner draws E and F for each seed, evaluates the selected
statistics and writes one CSV row per (instance, statistic).  The same
config always yields the same rows, whatever the worker count.
"""

import sys

from ffgeom import export, run_experiment

config = {
    "p": 11,
    "E": {"kind": "random", "params": {"size": 15}},
    "F": {"kind": "random", "params": {"size": 15}},
    "select": ["T*", "Q:symmetric", "audit_incidence_bound", "audit_triple_bound", "certify"],
    "tree": "vertices=3 edges=1-2,2-3 pin=1",
    "seeds": 5,
}

report = run_experiment(config)
sys.stdout.write(export(report, "csv").decode())
print("exit status:", report.exit_status)
