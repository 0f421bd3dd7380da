"""Observability: stage observers and CLI logging setup."""
