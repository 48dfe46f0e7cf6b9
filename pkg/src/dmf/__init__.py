"""Exact arithmetic and verification suite for Drinfeld modular forms over F_q[t]"""
__all__ = ["workflows", "activities"]
