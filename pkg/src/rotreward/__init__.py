"""rotreward: execution-free SQL scoring for Text-to-SQL reinforcement learning.

Compiles SQL into normalized relational-operator-tree graphs and computes
outcome rewards (graph-matching-network similarity, rule-based partial
matching, graded execution accuracy) plus stepwise rewards over CTE
subqueries. Exposed as a library, a CLI, and an NDJSON batch service.
"""

__version__ = "0.1.0"
