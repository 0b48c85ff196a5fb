"""
验收检查套件
Acceptance check suites with pass/fail reports
"""
from .report import CheckResult, SuiteReport
from .suites import SUITES, random_far_points, run_suite

__all__ = ['CheckResult', 'SuiteReport', 'SUITES', 'random_far_points', 'run_suite']
