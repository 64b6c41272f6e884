"""
Evaluation framework for pmc-sparse.
Brute-force oracles, seeded fixtures, certification suites and the corpus benchmark.
"""
