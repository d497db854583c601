"""Test suite for the G∼ workbench"""
