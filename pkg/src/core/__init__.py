"""Costing, feasibility checking, splitting, search and reporting"""
