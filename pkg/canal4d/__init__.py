"""
四维欧氏空间中的运河曲面

平行传输标架、闭式曲率公式、有限差分 oracle 与网格导出。

许可证：MIT
"""

__version__ = "1.0.0"
__license__ = "MIT"
