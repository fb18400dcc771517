"""Runnable demos"""
