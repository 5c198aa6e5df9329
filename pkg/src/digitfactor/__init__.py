"""Digit-polynomial integer factorization toolkit."""
