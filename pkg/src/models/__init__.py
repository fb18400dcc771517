"""Pydantic models for instances, plans, schedules and results"""
