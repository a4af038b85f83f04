"""
Polytrope Explorer
==================
Streamlit front end for the polytrope toolkit: enter a weight matrix, look at
its Kleene star, facets and vertices, the volume / Ehrhart / h*-polynomials,
the oracle cross-checks and (n = 4, 5) the central subdivision of the
fundamental polytope.

    streamlit run polytrope_dashboard.py
"""

import time

import numpy as np
import pandas as pd
import plotly.graph_objects as go
import streamlit as st

from cohomology_volume_integrator import polytrope_vertices, volume_pipeline_report
from ehrhart_todd_transformer import polynomial_triple, univariate
from exact_polynomial_algebra import format_fraction, render
from fundamental_polytope_subdivision import central_subdivision, verify_coefficients_3d, verify_coefficients_4d
from lattice_point_oracle import box_size
from polytrope_config import PolytropeConfig, PolytropeError
from polytrope_verifier import run_verification
from tropical_weight_matrix import hrep, kleene_star, parse_matrix, require_kleene
from volume_polynomial_cache import get_volume_cache

st.set_page_config(
    page_title=PolytropeConfig.DASHBOARD_TITLE,
    page_icon="🔷",
    layout="wide",
)


def show_cache_monitor():
    """Cache statistics and controls in the sidebar."""
    st.sidebar.markdown("---")
    st.sidebar.subheader("⚡ Volume Cache")

    cache = get_volume_cache()
    cache_stats = cache.get_cache_stats()
    st.sidebar.metric("Cache Hit Rate", cache_stats['cache_hit_rate'])
    st.sidebar.metric("Cached Cones", f"{cache_stats['total_cached_items']}/{cache_stats['max_entries']}")

    if st.sidebar.button("🗑️ Clear Cache"):
        cache.clear_cache()
        st.sidebar.success("Cache cleared!")
        st.rerun()


def render_polytrope_chart(vertices, n):
    """Polygon (n = 3) or hull mesh (n = 4) through the vertices, in the chart x_n = 0."""
    points = np.array(vertices, dtype=float)
    fig = go.Figure()
    if n == 3:
        center = points.mean(axis=0)
        order = np.argsort(np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0]))
        ring = np.vstack([points[order], points[order][:1]])
        fig.add_trace(go.Scatter(
            x=ring[:, 0], y=ring[:, 1],
            mode='lines+markers',
            fill='toself',
            marker=dict(size=9, color='royalblue'),
            hovertemplate="x1=%{x}<br>x2=%{y}<extra></extra>",
            name='polytrope',
        ))
        fig.update_layout(xaxis_title="x1", yaxis_title="x2", yaxis=dict(scaleanchor="x"))
    else:
        fig.add_trace(go.Mesh3d(
            x=points[:, 0], y=points[:, 1], z=points[:, 2],
            alphahull=0, opacity=0.45, color='royalblue', name='polytrope',
        ))
        fig.add_trace(go.Scatter3d(
            x=points[:, 0], y=points[:, 1], z=points[:, 2],
            mode='markers', marker=dict(size=4, color='navy'), name='vertices',
        ))
    fig.update_layout(title=f"Polytrope with {len(vertices)} vertices", height=450, showlegend=False)
    st.plotly_chart(fig, use_container_width=True)


def render_hstar_chart(hstar):
    values = [float(h) for h in hstar]
    fig = go.Figure(data=[
        go.Bar(
            x=[f"h*_{i}" for i in range(len(values))],
            y=values,
            marker_color='seagreen',
            text=[format_fraction(h) for h in hstar],
            textposition='auto',
        )
    ])
    fig.update_layout(title="h*-vector at c", yaxis_title="value", height=350)
    st.plotly_chart(fig, use_container_width=True)


def show_kleene_tab(W, original):
    st.markdown("### 🔷 Kleene Star")
    if original is not None and original != W:
        st.warning("⚠️ Input was replaced by its Kleene star")
    st.dataframe(pd.DataFrame(W.to_list(), index=range(1, W.n + 1), columns=range(1, W.n + 1)))

    col1, col2 = st.columns(2)
    with col1:
        st.markdown("#### Facet inequalities")
        st.code("\n".join(hrep(W).describe()))
    with col2:
        st.markdown("#### Vertices (x_n = 0)")
        vertices = polytrope_vertices(W)
        expected = PolytropeConfig.expected_vertex_count(W.n)
        st.metric("Vertices", len(vertices), f"maximal: {expected}", delta_color="off")
        st.dataframe(pd.DataFrame(vertices, columns=[f"x{i}" for i in range(1, W.n)]))
    if W.n in (3, 4) and len(vertices) > W.n:
        render_polytrope_chart(vertices, W.n)


def show_polynomial_tab(W, dilate):
    st.markdown("### 📐 Volume, Ehrhart and h*-polynomials")
    with st.spinner("Running the Groebner pipeline..."):
        start_time = time.time()
        triple = polynomial_triple(W)
        elapsed = time.time() - start_time
    if triple.volume.tie_flag:
        st.warning("⚠️ Weight vector lies on a Groebner cone boundary; polynomials come from the refined order")

    hstar = triple.hstar.evaluate_at(W)
    col1, col2, col3, col4 = st.columns(4)
    with col1:
        st.metric("Vol(c)", format_fraction(triple.volume.value()))
    with col2:
        st.metric(f"Points (k={dilate})", format_fraction(triple.ehrhart.count(W, dilate)))
    with col3:
        st.metric("h*", " ".join(format_fraction(h) for h in hstar))
    with col4:
        st.metric("Pipeline time", f"{elapsed:.2f}s")

    st.markdown("#### Univariate")
    st.dataframe(pd.DataFrame([
        {'polynomial': 'volume', 'at c': univariate(triple.volume.normalized, W).render()},
        {'polynomial': 'ehrhart', 'at c': univariate(triple.ehrhart.multivariate, W).render()},
        {'polynomial': 'h*', 'at c': univariate(triple.hstar, W).render()},
    ]), hide_index=True)
    render_hstar_chart(hstar)

    with st.expander("Multivariate normalized volume polynomial"):
        st.code(render(triple.volume.normalized))
    with st.expander("Multivariate Ehrhart polynomial"):
        st.code(render(triple.ehrhart.multivariate))
    with st.expander("Multivariate h*-polynomial"):
        st.code(str(triple.hstar))
    with st.expander("Pipeline report"):
        st.json(volume_pipeline_report(W))


def show_verification_tab(W, cap):
    st.markdown("### 🧪 Oracle Verification")
    st.write(f"Largest enumeration box (k=4): {box_size(W, 4):,} points, cap {cap:,}")
    depth = st.radio("Depth", PolytropeConfig.VERIFY_DEPTHS, horizontal=True)
    if st.button("Run verification", type="primary"):
        with st.spinner("Counting lattice points..."):
            try:
                report = run_verification(W, depth, cap)
            except PolytropeError as e:
                st.error(f"❌ {e}")
                return
        if report.passed:
            st.success(f"✅ {report.summary_line()} in {report.elapsed:.2f}s")
        else:
            st.error(f"❌ {report.summary_line()}")
        st.dataframe(report.to_frame(), hide_index=True)


def show_subdivision_tab(W):
    st.markdown("### 🧩 Central Subdivision of the Fundamental Polytope")
    if W.n not in (4, 5):
        st.info("The subdivision report covers n = 4 and n = 5")
        return
    with st.spinner("Searching the lower hull..."):
        S = central_subdivision(W)
        triple = polynomial_triple(W)

    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("Cells", len(S.cells))
    with col2:
        st.metric("Triangulation", "yes" if S.is_triangulation() else "no")
    with col3:
        st.metric("Central", "yes" if S.is_central() else "no")

    st.markdown("#### Cells")
    st.dataframe(S.cell_table(), hide_index=True)
    st.markdown("#### Vertices")
    st.dataframe(S.vertex_table(), hide_index=True)

    if W.n == 4:
        st.markdown("#### Square facets")
        st.dataframe(pd.DataFrame(S.square_diagonals()).astype(str), hide_index=True)
    if triple.volume.tie_flag:
        st.warning("⚠️ Not of maximal type: the coefficient correspondence needs a central triangulation")
        return
    if W.n == 4:
        report = verify_coefficients_3d(triple.volume, S)
    else:
        report = verify_coefficients_4d(triple.volume, S)

    st.markdown("#### Coefficient correspondence")
    if report.passed:
        st.success("✅ Every coefficient matches the subdivision")
    else:
        st.error(f"❌ {len(report.failures)} failures, first: {report.first_failure}")
    st.dataframe(pd.DataFrame([{'partition': label, 'sum': report.class_sums.get(label, 0), 'expected': expected}
                               for label, expected in report.expected_sums.items()]), hide_index=True)
    with st.expander("Per-monomial table"):
        st.dataframe(report.table, hide_index=True)


def main():
    st.title(f"🔷 {PolytropeConfig.DASHBOARD_TITLE}")

    with st.sidebar:
        st.markdown("### Weight matrix")
        text = st.text_area("Rows of integers (or a JSON array)", PolytropeConfig.DASHBOARD_DEFAULT_MATRIX, height=160)
        take_star = st.checkbox("Replace by its Kleene star", value=False)
        dilate = st.slider("Dilate k", 0, PolytropeConfig.DASHBOARD_MAX_DILATE, 1)
        cap = st.number_input("Enumeration cap", min_value=1000, value=PolytropeConfig.ENUMERATION_CAP, step=1000)
    show_cache_monitor()

    try:
        original = parse_matrix(text)
        W = kleene_star(original) if take_star else original
        require_kleene(W)
        if not PolytropeConfig.MIN_N <= W.n <= PolytropeConfig.MAX_N:
            st.error(f"❌ Supported sizes are n = {PolytropeConfig.MIN_N}..{PolytropeConfig.MAX_N}")
            return
    except PolytropeError as e:
        st.error(f"❌ {e}")
        return
    except ValueError as e:
        st.error(f"❌ Invalid matrix: {e}")
        return

    tab1, tab2, tab3, tab4 = st.tabs(["🔷 Kleene Star", "📐 Polynomials", "🧪 Verification", "🧩 Subdivision"])
    with tab1:
        show_kleene_tab(W, original)
    with tab2:
        show_polynomial_tab(W, dilate)
    with tab3:
        show_verification_tab(W, int(cap))
    with tab4:
        show_subdivision_tab(W)


if __name__ == "__main__":
    main()
