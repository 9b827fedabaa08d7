"""API Layer - Request/Response contracts"""
