"""kvpoly test suite"""
