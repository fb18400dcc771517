"""Adapters for external data: simulated scenarios and distance matrices"""
