"""
lambdaosc reporters
"""

from .html_reporter import HTMLReporter

__all__ = ['HTMLReporter']
