"""Learner modules for bunsetsukit.

Importing this package triggers all @learner decorator registrations.
"""

from bunsetsukit.learners import (  # noqa: F401
    maxent,
    rules,
    tree,
)
