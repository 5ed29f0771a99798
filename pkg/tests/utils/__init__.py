# Test utilities
