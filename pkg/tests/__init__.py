"""Tests for emh-rank."""
