"""bunsetsukit - bunsetsu boundary identification with supervised learners."""

__version__ = "0.1.0"
