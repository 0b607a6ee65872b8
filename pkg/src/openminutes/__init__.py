"""Structured access to municipal council meeting minutes.

The package turns raw minute text into validated records, indexes the
published records for BM25-ranked faceted search, serves them over HTTP,
and measures extraction quality against gold annotations.
"""

__version__ = "0.1.0"
