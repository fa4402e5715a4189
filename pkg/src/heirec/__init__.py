"""Diet-quality scoring, food retrieval, and recommendation toolkit.

Pipeline stages: ingest person-day intake and a food corpus, score diets
on the 13-component HEI-2020 scale, retrieve and rank candidate foods by
projected score improvement under health and energy constraints, generate
grounded explanations, and run offline population simulations.
"""

__version__ = "0.1.0"
