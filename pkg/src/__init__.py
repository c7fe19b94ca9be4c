"""emh-rank source tree."""
