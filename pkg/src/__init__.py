"""
Sperner 系統、超圖與多元函數的重建工具核心模組
"""
