package soot.toolkits.scalar;

import java.util.ArrayDeque;
import java.util.Deque;

public abstract class FlowAnalysis<N, A> {
  protected final DirectedGraph<N> graph;

  /** Runs the fixed point iteration over the graph. */
  protected void doAnalysis() {
    // seed the worklist with every node
    Deque<N> worklist = new ArrayDeque<N>(graph.getNodes());
    while (!worklist.isEmpty()) {
      N node = worklist.poll();
      flowThrough(node);
    }
  }

  /** Merges two flow sets into the target. */
  protected void mergeInto(A in1, A in2, A out) {
    // union is the default confluence operator
    copy(in1, out);
    union(in2, out);
  }
}
