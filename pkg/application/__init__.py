"""Application Layer - Use cases and orchestration"""
