"""
HTML report for the verification suite
"""

import math
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Sequence

from jinja2 import Environment, select_autoescape

TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>lambdaosc verification - {{ timestamp }}</title>
    <style>
        * { margin: 0; padding: 0; box-sizing: border-box; }

        :root {
            --bg-gradient: linear-gradient(135deg, #0f172a 0%, #1e293b 50%, #334155 100%);
            --glass-bg: rgba(255, 255, 255, 0.05);
            --glass-border: rgba(255, 255, 255, 0.1);
            --text-primary: #e2e8f0;
            --text-secondary: #94a3b8;
            --accent-blue: #3b82f6;
            --success: #10b981;
            --danger: #ef4444;
        }

        body {
            font-family: 'Inter', -apple-system, BlinkMacSystemFont, sans-serif;
            background: var(--bg-gradient);
            color: var(--text-primary);
            min-height: 100vh;
            padding: 40px;
        }

        .header { margin-bottom: 32px; }
        .header h1 { font-size: 2.2rem; font-weight: 800; }
        .header p { color: var(--text-secondary); margin-top: 6px; }

        .stats { display: flex; gap: 20px; margin-bottom: 32px; }
        .stat-card {
            flex: 1;
            background: var(--glass-bg);
            border: 1px solid var(--glass-border);
            border-radius: 16px;
            padding: 20px;
        }
        .stat-value { font-size: 2rem; font-weight: 700; }
        .stat-label { color: var(--text-secondary); }

        .section {
            background: var(--glass-bg);
            border: 1px solid var(--glass-border);
            border-radius: 16px;
            padding: 24px;
            margin-bottom: 24px;
        }
        .section-title { font-size: 1.3rem; margin-bottom: 16px; }

        table { width: 100%; border-collapse: collapse; }
        th, td { padding: 10px 12px; text-align: left; border-bottom: 1px solid var(--glass-border); }
        th { color: var(--text-secondary); font-weight: 600; }
        td.num { font-family: 'JetBrains Mono', monospace; text-align: right; }

        .badge { padding: 4px 10px; border-radius: 999px; font-size: 0.85rem; font-weight: 600; }
        .badge-success { background: rgba(16, 185, 129, 0.15); color: var(--success); }
        .badge-danger { background: rgba(239, 68, 68, 0.15); color: var(--danger); }
        .error { color: var(--danger); font-size: 0.85rem; margin-top: 4px; }
    </style>
</head>
<body>
    <div class="header">
        <h1>{{ '✅' if all_passed else '❌' }} Verification report</h1>
        <p>Generated {{ timestamp }}{% if duration %} in {{ duration }}{% endif %}</p>
    </div>

    <div class="stats">
        <div class="stat-card"><div class="stat-value">{{ total }}</div><div class="stat-label">Checks</div></div>
        <div class="stat-card"><div class="stat-value" style="color: var(--success)">{{ passed }}</div><div class="stat-label">Passed</div></div>
        <div class="stat-card"><div class="stat-value" style="color: var(--danger)">{{ failed }}</div><div class="stat-label">Failed</div></div>
    </div>

    {% for group, rows in groups %}
    <div class="section">
        <h2 class="section-title">{{ group }}</h2>
        <table>
            <thead>
                <tr><th>Check</th><th>Description</th><th>Measured</th><th>Tolerance</th><th>Status</th></tr>
            </thead>
            <tbody>
            {% for row in rows %}
                <tr>
                    <td>{{ row.check_id }}</td>
                    <td>{{ row.description }}{% if row.error %}<div class="error">{{ row.error }}</div>{% endif %}</td>
                    <td class="num">{{ row.measured | sci }}</td>
                    <td class="num">{{ row.tolerance | sci }}</td>
                    <td>
                    {% if row.passed %}<span class="badge badge-success">pass</span>
                    {% else %}<span class="badge badge-danger">fail</span>{% endif %}
                    </td>
                </tr>
            {% endfor %}
            </tbody>
        </table>
    </div>
    {% endfor %}
</body>
</html>
"""


def _sci(value: Any) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return '-'
    return f'{float(value):.3e}'


class HTMLReporter:
    """Render verification results (CheckResult or its dict form) to a standalone page."""

    def __init__(self):
        self.env = Environment(autoescape=select_autoescape(default_for_string=True))
        self.env.filters['sci'] = _sci
        self.template = self.env.from_string(TEMPLATE)

    def render(self, results: Sequence[Any], duration: str = '') -> str:
        rows: List[Dict[str, Any]] = [r.to_dict() if hasattr(r, 'to_dict') else dict(r)
                                      for r in results]
        grouped: Dict[str, List[Dict[str, Any]]] = {}
        for row in rows:
            grouped.setdefault(row['group'], []).append(row)
        passed = sum(1 for r in rows if r['passed'])
        return self.template.render(
            timestamp=datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
            duration=duration,
            total=len(rows),
            passed=passed,
            failed=len(rows) - passed,
            all_passed=bool(rows) and passed == len(rows),
            groups=list(grouped.items()),
        )

    def generate(self, results: Sequence[Any], output_file: str = 'verify.html',
                 duration: str = '') -> str:
        output_path = Path(output_file)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(self.render(results, duration))
        return str(output_path)
