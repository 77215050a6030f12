"""Exact solvers and benchmark generators for user authorization queries.

The package answers one question in several ways: given an RBAC policy,
a required permission set, budgets on roles and extra permissions, and
separation-of-duty constraints, is there a compliant role subset? A
branching solver with representative-family dynamic programming handles
the structured case quickly; brute-force and restricted-form baselines
cross-check it; generators produce the hardness constructions and random
workloads the test suite runs on.
"""

__version__ = "0.1.0"
