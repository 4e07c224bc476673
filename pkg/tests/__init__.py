"""Tests for Fingent."""
