"""Graded polynomial identities of UT2 and UT3 over finite fields."""

__version__ = "0.1.0"
