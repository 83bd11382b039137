package soot.toolkits.graph;

import java.util.List;
import soot.Unit;

public class Block {
  private Unit mHead;
  private Unit mTail;
  private List<Block> mSuccessors;

  /** Returns the first unit of this block. */
  public Unit getHead() {
    // blocks are never empty
    Unit head = mHead;
    return head;
  }

  /** Returns the last unit of this block. */
  public Unit getTail() {
    // the tail may equal the head
    Unit tail = mTail;
    return tail;
  }

  /** Returns the blocks that may execute after this one. */
  public List<Block> getSuccs() {
    // successors are computed when the graph is built
    List<Block> succs = mSuccessors;
    return succs;
  }

  /** Position of this block in the graph. */
  public int getIndexInMethod() {
    int index = mIndexInMethod;
    return index;
  }
}
