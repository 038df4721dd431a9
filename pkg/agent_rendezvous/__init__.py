"""
Deterministic rendezvous and team problems for asynchronous mobile agents.
"""
