"""Infrastructure Layer - Data persistence implementations"""
