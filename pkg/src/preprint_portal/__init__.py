"""Self-hosted pre-print search portal.

Harvests article metadata incrementally over an OAI-PMH subset, indexes it
for full-text and field-restricted search, ranks results by date, social
mentions, collection popularity or relevance, and serves a JSON API plus
thumbnail strips for an interactive reading UI.
"""

__version__ = "0.1.0"
